#include "uat/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "uat/errors.hpp"
#include "uat/physics.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary payloads are little-endian float64");

namespace uat {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(std::size_t v) { return std::to_string(v); }

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text, const std::string& context) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0')
        throw IoError(context + ": cannot parse number from '" + t + "'");
    return v;
}

std::size_t parse_size(const std::string& text, const std::string& context) {
    const double v = parse_double(text, context);
    if (v < 0 || v != std::floor(v))
        throw IoError(context + ": expected a nonnegative integer, got '" + text + "'");
    return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& text, const std::string& context) {
    const std::string t = trim(text);
    if (t == "true" || t == "1") return true;
    if (t == "false" || t == "0") return false;
    throw IoError(context + ": expected true/false, got '" + t + "'");
}

struct Header {
    std::string kind;  // e.g. "amplitude-matrix"
    std::map<std::string, std::string> fields;

    const std::string& require(const std::string& key, const std::string& context) const {
        auto it = fields.find(key);
        if (it == fields.end())
            throw IoError(context + ": missing header field '" + key + "'");
        return it->second;
    }
};

void write_header(std::ostream& os, const std::string& kind,
                  const std::vector<std::pair<std::string, std::string>>& fields) {
    os << "# uatomo " << kind << " v1\n";
    for (const auto& [key, value] : fields) os << "# " << key << " = " << value << "\n";
}

Header read_header(std::istream& is, const std::string& context) {
    Header header;
    std::string line;
    bool first = true;
    while (is.peek() == '#') {
        std::getline(is, line);
        std::string body = trim(line.substr(1));
        if (first) {
            first = false;
            if (body.rfind("uatomo ", 0) != 0)
                throw IoError(context + ": not a uatomo file (bad magic line)");
            std::istringstream ss(body);
            std::string tag, kind, version;
            ss >> tag >> kind >> version;
            header.kind = kind;
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) continue;
        header.fields[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
    }
    if (first) throw IoError(context + ": missing header");
    return header;
}

void write_payload_text(std::ostream& os, const std::vector<double>& values, std::size_t per_line) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        os << fmt(values[i]);
        os << (((i + 1) % per_line == 0) ? '\n' : ' ');
    }
}

// Binary layout: header block in <path>.hdr, payload raw float64 in <path>.
std::filesystem::path sidecar(const std::filesystem::path& path) {
    std::filesystem::path p = path;
    p += ".hdr";
    return p;
}

void write_file(const std::filesystem::path& path, const std::string& kind,
                const std::vector<std::pair<std::string, std::string>>& fields,
                const std::vector<double>& values, std::size_t per_line, bool binary) {
    if (binary) {
        std::ofstream hdr(sidecar(path));
        if (!hdr) throw IoError("cannot open '" + sidecar(path).string() + "' for writing");
        write_header(hdr, kind, fields);
        hdr << "# layout = float64-le\n";
        if (!hdr) throw IoError("write failed: " + sidecar(path).string());
        std::ofstream os(path, std::ios::binary);
        if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
        os.write(reinterpret_cast<const char*>(values.data()),
                 static_cast<std::streamsize>(values.size() * sizeof(double)));
        if (!os) throw IoError("write failed: " + path.string());
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    std::ostringstream buffer;
    write_header(buffer, kind, fields);
    write_payload_text(buffer, values, per_line);
    os << buffer.str();
    if (!os) throw IoError("write failed: " + path.string());
}

struct LoadedFile {
    Header header;
    std::vector<double> values;
};

LoadedFile read_file(const std::filesystem::path& path, std::size_t expected_count_hint,
                     const std::string& context) {
    if (std::filesystem::exists(sidecar(path))) {
        std::ifstream hdr(sidecar(path));
        if (!hdr) throw IoError(context + ": cannot open '" + sidecar(path).string() + "'");
        LoadedFile out{read_header(hdr, context), {}};
        std::ifstream is(path, std::ios::binary);
        if (!is) throw IoError(context + ": cannot open '" + path.string() + "'");
        is.seekg(0, std::ios::end);
        const auto bytes = static_cast<std::size_t>(is.tellg());
        is.seekg(0);
        if (bytes % sizeof(double) != 0)
            throw IoError(context + ": binary payload size is not a multiple of 8");
        out.values.resize(bytes / sizeof(double));
        is.read(reinterpret_cast<char*>(out.values.data()), static_cast<std::streamsize>(bytes));
        if (!is) throw IoError(context + ": short read from '" + path.string() + "'");
        return out;
    }
    std::ifstream is(path);
    if (!is) throw IoError(context + ": cannot open '" + path.string() + "'");
    LoadedFile out{read_header(is, context), {}};
    (void)expected_count_hint;
    double v;
    while (is >> v) out.values.push_back(v);
    return out;
}

}  // namespace

void write_amplitude_matrix(const std::filesystem::path& path, const AmplitudeMatrix& matrix,
                            bool binary, const std::map<std::string, std::string>& extra_header) {
    matrix.validate();
    std::vector<std::pair<std::string, std::string>> fields = {
        {"n_elements", fmt(matrix.n_elements)},
        {"reflector_depth_m", fmt(matrix.reflector_depth)},
        {"medium", matrix.medium_label},
        {"units", "linear-amplitude"},
    };
    for (const auto& [k, v] : extra_header) fields.emplace_back(k, v);
    write_file(path, "amplitude-matrix", fields, matrix.values, matrix.n_elements, binary);
}

AmplitudeMatrix read_amplitude_matrix(const std::filesystem::path& path) {
    const std::string context = "amplitude matrix '" + path.string() + "'";
    LoadedFile file = read_file(path, 0, context);
    if (file.header.kind != "amplitude-matrix")
        throw IoError(context + ": wrong file kind '" + file.header.kind + "'");
    AmplitudeMatrix matrix;
    matrix.n_elements = parse_size(file.header.require("n_elements", context), context);
    matrix.reflector_depth = parse_double(file.header.require("reflector_depth_m", context), context);
    matrix.medium_label = file.header.require("medium", context);
    matrix.values = std::move(file.values);
    if (matrix.values.size() != matrix.n_elements * matrix.n_elements)
        throw IoError(context + ": expected " + std::to_string(matrix.n_elements * matrix.n_elements) +
                      " values, found " + std::to_string(matrix.values.size()));
    matrix.validate();
    return matrix;
}

void write_image(const std::filesystem::path& path, const AttenuationImage& image, bool binary) {
    image.validate();
    std::vector<double> db(image.values.size());
    for (std::size_t i = 0; i < db.size(); ++i) db[i] = np_per_m_to_db_per_cm(image.values[i]);
    write_file(path, "image",
               {
                   {"n_axial", fmt(image.grid.n_axial)},
                   {"n_lateral", fmt(image.grid.n_lateral)},
                   {"cell_width_m", fmt(image.grid.cell_width)},
                   {"cell_height_m", fmt(image.grid.cell_height)},
                   {"units", "dB/cm"},
               },
               db, image.grid.n_lateral, binary);
}

namespace {

AttenuationImage image_from_file(LoadedFile& file, const std::string& context, bool expect_mask) {
    if (file.header.kind != "image")
        throw IoError(context + ": wrong file kind '" + file.header.kind + "'");
    AttenuationImage image;
    image.grid.n_axial = parse_size(file.header.require("n_axial", context), context);
    image.grid.n_lateral = parse_size(file.header.require("n_lateral", context), context);
    image.grid.cell_width = parse_double(file.header.require("cell_width_m", context), context);
    image.grid.cell_height = parse_double(file.header.require("cell_height_m", context), context);
    image.values = std::move(file.values);
    if (image.values.size() != image.grid.cell_count())
        throw IoError(context + ": value count does not match the grid dimensions");
    const std::string units = file.header.require("units", context);
    if (expect_mask) {
        if (units != "mask") throw IoError(context + ": expected a mask file, units are '" + units + "'");
        return image;
    }
    if (units == "dB/cm") {
        for (double& v : image.values) v = db_per_cm_to_np_per_m(v);
    } else if (units != "Np/m") {
        throw IoError(context + ": unsupported image units '" + units + "'");
    }
    image.validate();
    return image;
}

}  // namespace

AttenuationImage read_image(const std::filesystem::path& path) {
    const std::string context = "image '" + path.string() + "'";
    LoadedFile file = read_file(path, 0, context);
    return image_from_file(file, context, false);
}

void write_mask(const std::filesystem::path& path, const RegionMask& mask) {
    mask.validate();
    std::vector<double> values(mask.inside.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = mask.inside[i] ? 1.0 : 0.0;
    write_file(path, "image",
               {
                   {"n_axial", fmt(mask.grid.n_axial)},
                   {"n_lateral", fmt(mask.grid.n_lateral)},
                   {"cell_width_m", fmt(mask.grid.cell_width)},
                   {"cell_height_m", fmt(mask.grid.cell_height)},
                   {"units", "mask"},
               },
               values, mask.grid.n_lateral, false);
}

RegionMask read_mask(const std::filesystem::path& path) {
    const std::string context = "mask '" + path.string() + "'";
    LoadedFile file = read_file(path, 0, context);
    AttenuationImage as_image = image_from_file(file, context, true);
    RegionMask mask(as_image.grid);
    for (std::size_t i = 0; i < as_image.values.size(); ++i) {
        const double v = as_image.values[i];
        if (v != 0.0 && v != 1.0)
            throw IoError(context + ": mask values must be 0 or 1");
        mask.inside[i] = v != 0.0 ? 1 : 0;
    }
    return mask;
}

void write_normalized_matrix(const std::filesystem::path& path, const NormalizedData& data,
                             bool binary) {
    const std::size_t n = data.geometry.n_elements;
    if (data.b.size() != n * n)
        throw ValidationError("write_normalized_matrix: data length is not n_elements^2");
    write_file(path, "normalized-matrix",
               {
                   {"n_elements", fmt(n)},
                   {"reflector_depth_m", fmt(data.geometry.reflector_depth)},
                   {"units", "Np"},
                   {"absolute", data.absolute ? "true" : "false"},
               },
               data.b, n, binary);
}

void write_pgm16(const std::filesystem::path& path, const AttenuationImage& image,
                 double window_lo_db_cm, double window_hi_db_cm) {
    image.validate();
    if (!(window_hi_db_cm > window_lo_db_cm))
        throw ValidationError("pgm export: window must have positive width");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    os << "P5\n"
       << image.grid.n_lateral << " " << image.grid.n_axial << "\n65535\n";
    const double span = window_hi_db_cm - window_lo_db_cm;
    for (double v : image.values) {
        const double db = np_per_m_to_db_per_cm(v);
        double unit = (db - window_lo_db_cm) / span;
        unit = std::min(1.0, std::max(0.0, unit));
        const auto level = static_cast<unsigned>(std::lround(unit * 65535.0));
        const unsigned char bytes[2] = {static_cast<unsigned char>(level >> 8),
                                        static_cast<unsigned char>(level & 0xFF)};
        os.write(reinterpret_cast<const char*>(bytes), 2);
    }
    if (!os) throw IoError("write failed: " + path.string());
}

void write_metrics_report(const std::filesystem::path& path, const MetricsReport& report) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    os << "# uatomo metrics v1\n";
    os << "crf = " << fmt(report.crf) << "\n";
    os << "cnr = " << fmt(report.cnr) << "\n";
    os << "rmse = " << fmt(report.rmse) << "\n";
    os << "psnr = " << fmt(report.psnr) << "\n";
    os << "mu_inclusion = " << fmt(report.stats.mean_inclusion) << "\n";
    os << "mu_background = " << fmt(report.stats.mean_background) << "\n";
    os << "sigma_inclusion = " << fmt(report.stats.std_inclusion) << "\n";
    os << "sigma_background = " << fmt(report.stats.std_background) << "\n";
    os << "cnr_degenerate = " << (report.cnr_degenerate ? "true" : "false") << "\n";
    os << "psnr_infinite = " << (report.psnr_infinite ? "true" : "false") << "\n";
    if (!os) throw IoError("write failed: " + path.string());
}

MetricsReport read_metrics_report(const std::filesystem::path& path) {
    const std::string context = "metrics '" + path.string() + "'";
    std::ifstream is(path);
    if (!is) throw IoError(context + ": cannot open file");
    MetricsReport report;
    std::string line;
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "crf") report.crf = parse_double(value, context);
        else if (key == "cnr") report.cnr = parse_double(value, context);
        else if (key == "rmse") report.rmse = parse_double(value, context);
        else if (key == "psnr") report.psnr = parse_double(value, context);
        else if (key == "mu_inclusion") report.stats.mean_inclusion = parse_double(value, context);
        else if (key == "mu_background") report.stats.mean_background = parse_double(value, context);
        else if (key == "sigma_inclusion") report.stats.std_inclusion = parse_double(value, context);
        else if (key == "sigma_background") report.stats.std_background = parse_double(value, context);
        else if (key == "cnr_degenerate") report.cnr_degenerate = parse_bool(value, context);
        else if (key == "psnr_infinite") report.psnr_infinite = parse_bool(value, context);
    }
    return report;
}

void write_convergence_report(const std::filesystem::path& path, const SolveReport& report) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    os << "# uatomo convergence v1\n";
    os << "converged = " << (report.converged ? "true" : "false") << "\n";
    os << "status = " << report.status << "\n";
    os << "iterations = " << report.iterations << "\n";
    os << "stages = " << report.stages << "\n";
    os << "lambda = " << fmt(report.lambda) << "\n";
    os << "epsilon_np = " << fmt(report.epsilon) << "\n";
    os << "final_objective = " << fmt(report.final_objective) << "\n";
    os << "final_gradient_norm = " << fmt(report.final_gradient_norm) << "\n";
    os << "data_term_l1 = " << fmt(report.data_term_l1) << "\n";
    os << "regularizer_term_l1 = " << fmt(report.regularizer_term_l1) << "\n";
    os << "objective_l1 = " << fmt(report.objective_l1) << "\n";
    if (!os) throw IoError("write failed: " + path.string());
}

void export_matrix_triplets(const std::filesystem::path& path, const SparseMatrix& matrix) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    matrix.export_triplets(os);
    if (!os) throw IoError("write failed: " + path.string());
}

PhantomSpec load_phantom_spec(const std::filesystem::path& path) {
    const std::string context = "phantom spec '" + path.string() + "'";
    std::ifstream is(path);
    if (!is) throw IoError(context + ": cannot open file");
    PhantomSpec phantom;
    bool have_background = false;
    std::string line;
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw IoError(context + ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "background_db_cm") {
            phantom.background_attenuation = db_per_cm_to_np_per_m(parse_double(value, context));
            have_background = true;
            continue;
        }
        if (key != "inclusion")
            throw IoError(context + ": unknown key '" + key + "'");

        std::istringstream ss(value);
        std::string kind;
        ss >> kind;
        PhantomShape shape;
        if (kind == "ellipse") shape.kind = PhantomShape::Kind::ellipse;
        else if (kind == "rectangle") shape.kind = PhantomShape::Kind::rectangle;
        else throw IoError(context + ": unknown inclusion kind '" + kind + "'");

        std::map<std::string, double> params;
        std::string token;
        while (ss >> token) {
            const auto sep = token.find('=');
            if (sep == std::string::npos)
                throw IoError(context + ": bad inclusion parameter '" + token + "'");
            params[token.substr(0, sep)] = parse_double(token.substr(sep + 1), context);
        }
        auto take = [&](const char* name) {
            auto it = params.find(name);
            if (it == params.end())
                throw IoError(context + ": inclusion missing parameter '" + std::string(name) + "'");
            const double v = it->second;
            params.erase(it);
            return v;
        };
        shape.center_x = take("cx_m");
        shape.center_y = take("cy_m");
        if (shape.kind == PhantomShape::Kind::ellipse) {
            shape.extent_x = take("rx_m");
            shape.extent_y = take("ry_m");
        } else {
            shape.extent_x = take("width_m");
            shape.extent_y = take("height_m");
        }
        shape.attenuation = db_per_cm_to_np_per_m(take("value_db_cm"));
        if (!params.empty())
            throw IoError(context + ": unknown inclusion parameter '" + params.begin()->first + "'");
        phantom.inclusions.push_back(shape);
    }
    if (!have_background)
        throw IoError(context + ": missing 'background_db_cm'");
    return phantom;
}

void write_phantom_spec(const std::filesystem::path& path, const PhantomSpec& phantom) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    os << "# uatomo phantom v1\n";
    os << "background_db_cm = " << fmt(np_per_m_to_db_per_cm(phantom.background_attenuation)) << "\n";
    for (const auto& shape : phantom.inclusions) {
        if (shape.kind == PhantomShape::Kind::ellipse) {
            os << "inclusion = ellipse cx_m=" << fmt(shape.center_x) << " cy_m=" << fmt(shape.center_y)
               << " rx_m=" << fmt(shape.extent_x) << " ry_m=" << fmt(shape.extent_y)
               << " value_db_cm=" << fmt(np_per_m_to_db_per_cm(shape.attenuation)) << "\n";
        } else {
            os << "inclusion = rectangle cx_m=" << fmt(shape.center_x) << " cy_m=" << fmt(shape.center_y)
               << " width_m=" << fmt(shape.extent_x) << " height_m=" << fmt(shape.extent_y)
               << " value_db_cm=" << fmt(np_per_m_to_db_per_cm(shape.attenuation)) << "\n";
        }
    }
    if (!os) throw IoError("write failed: " + path.string());
}

}  // namespace uat
