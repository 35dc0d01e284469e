#include "lfpp/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lfpp::io {

namespace {

using nlohmann::json;

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("malformed number: " + s);
    return v;
}

std::vector<double> row_doubles(const std::vector<std::string>& row) {
    std::vector<double> out;
    out.reserve(row.size());
    for (const auto& cell : row) out.push_back(parse_double(cell));
    return out;
}

void expect_header(const std::vector<std::vector<std::string>>& table, const char* header) {
    if (table.empty()) throw std::invalid_argument("csv: missing header row");
    std::string joined;
    for (std::size_t i = 0; i < table[0].size(); ++i) {
        if (i) joined += ',';
        joined += table[0][i];
    }
    if (joined != header)
        throw std::invalid_argument("csv: unexpected header '" + joined + "'");
}

constexpr const char* kBoundsHeader =
    "xi,lambda_lower,lambda_upper,lambda_watabiki_ext,lambda_dg_guess,alpha_star_at_lower,"
    "g_upper_at_lower,q_at_lower,q_at_upper,c_at_lower,c_at_upper";
constexpr const char* kGammaHeader =
    "gamma,d_lower,d_upper,d_watabiki,d_dg_guess,xi_of_gamma_lower,xi_of_gamma_upper,"
    "geodesic_dim_bound";

}  // namespace

std::string format_g12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::string cell;
    std::vector<std::string> row;
    for (char c : text) {
        if (c == ',') {
            row.push_back(cell);
            cell.clear();
        } else if (c == '\n') {
            row.push_back(cell);
            cell.clear();
            rows.push_back(std::move(row));
            row.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    if (!cell.empty() || !row.empty()) {
        row.push_back(cell);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string bounds_rows_csv(const std::vector<bounds::BoundsRow>& rows) {
    std::string out = kBoundsHeader;
    out += '\n';
    for (const auto& r : rows) {
        const double cols[] = {r.xi,
                               r.lambda_lower,
                               r.lambda_upper,
                               r.lambda_watabiki_ext,
                               r.lambda_dg_guess,
                               r.alpha_star_at_lower,
                               r.g_upper_at_lower,
                               r.q_at_lower,
                               r.q_at_upper,
                               r.c_at_lower,
                               r.c_at_upper};
        for (std::size_t i = 0; i < std::size(cols); ++i) {
            if (i) out += ',';
            out += format_g12(cols[i]);
        }
        out += '\n';
    }
    return out;
}

std::string gamma_rows_csv(const std::vector<bounds::GammaRow>& rows) {
    std::string out = kGammaHeader;
    out += '\n';
    for (const auto& r : rows) {
        const double cols[] = {r.gamma,           r.d_lower,          r.d_upper,
                               r.d_watabiki,      r.d_dg_guess,       r.xi_of_gamma_lower,
                               r.xi_of_gamma_upper, r.geodesic_dim_bound};
        for (std::size_t i = 0; i < std::size(cols); ++i) {
            if (i) out += ',';
            out += format_g12(cols[i]);
        }
        out += '\n';
    }
    return out;
}

std::vector<bounds::BoundsRow> parse_bounds_rows_csv(const std::string& text) {
    auto table = parse_csv(text);
    expect_header(table, kBoundsHeader);
    std::vector<bounds::BoundsRow> rows;
    for (std::size_t i = 1; i < table.size(); ++i) {
        auto v = row_doubles(table[i]);
        if (v.size() != 11) throw std::invalid_argument("csv: bad bounds row width");
        bounds::BoundsRow r;
        r.xi = v[0];
        r.lambda_lower = v[1];
        r.lambda_upper = v[2];
        r.lambda_watabiki_ext = v[3];
        r.lambda_dg_guess = v[4];
        r.alpha_star_at_lower = v[5];
        r.g_upper_at_lower = v[6];
        r.q_at_lower = v[7];
        r.q_at_upper = v[8];
        r.c_at_lower = v[9];
        r.c_at_upper = v[10];
        rows.push_back(r);
    }
    return rows;
}

std::vector<bounds::GammaRow> parse_gamma_rows_csv(const std::string& text) {
    auto table = parse_csv(text);
    expect_header(table, kGammaHeader);
    std::vector<bounds::GammaRow> rows;
    for (std::size_t i = 1; i < table.size(); ++i) {
        auto v = row_doubles(table[i]);
        if (v.size() != 8) throw std::invalid_argument("csv: bad gamma row width");
        bounds::GammaRow r;
        r.gamma = v[0];
        r.d_lower = v[1];
        r.d_upper = v[2];
        r.d_watabiki = v[3];
        r.d_dg_guess = v[4];
        r.xi_of_gamma_lower = v[5];
        r.xi_of_gamma_upper = v[6];
        r.geodesic_dim_bound = v[7];
        rows.push_back(r);
    }
    return rows;
}

std::string xy_csv(const std::vector<std::pair<double, double>>& points, const std::string& xname,
                   const std::string& yname) {
    std::string out = xname + "," + yname + "\n";
    for (auto [x, y] : points) out += format_g12(x) + "," + format_g12(y) + "\n";
    return out;
}

std::vector<std::pair<double, double>> parse_xy_csv(const std::string& text) {
    auto table = parse_csv(text);
    if (table.empty() || table[0].size() != 2)
        throw std::invalid_argument("csv: expected a two-column table");
    std::vector<std::pair<double, double>> points;
    for (std::size_t i = 1; i < table.size(); ++i) {
        auto v = row_doubles(table[i]);
        if (v.size() != 2) throw std::invalid_argument("csv: bad xy row width");
        points.emplace_back(v[0], v[1]);
    }
    return points;
}

std::string crossing_record_json(const estimate::CrossingRecord& rec, bool with_geodesic) {
    json j;
    j["xi"] = rec.xi;
    j["k"] = rec.k;
    j["seed"] = rec.seed;
    j["sampler"] = field::sampler_name(rec.sampler);
    j["distance"] = rec.distance;
    j["vertex_count"] = rec.vertex_count;
    if (!rec.multi_xi.empty()) {
        j["multi_xi"] = rec.multi_xi;
        j["multi_lengths"] = rec.multi_lengths;
    }
    if (with_geodesic && !rec.geodesic.empty()) j["geodesic"] = rec.geodesic;
    return j.dump();
}

estimate::CrossingRecord parse_crossing_record(const std::string& line) {
    json j = json::parse(line);
    estimate::CrossingRecord rec;
    rec.xi = j.at("xi").get<double>();
    rec.k = j.at("k").get<int>();
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.sampler = field::sampler_from_name(j.at("sampler").get<std::string>());
    rec.distance = j.at("distance").get<double>();
    rec.vertex_count = j.at("vertex_count").get<std::int64_t>();
    if (j.contains("multi_xi")) {
        rec.multi_xi = j["multi_xi"].get<std::vector<double>>();
        rec.multi_lengths = j["multi_lengths"].get<std::vector<double>>();
        if (rec.multi_xi.size() != rec.multi_lengths.size())
            throw std::invalid_argument("record: multi_xi and multi_lengths length mismatch");
    }
    if (j.contains("geodesic")) rec.geodesic = j["geodesic"].get<std::vector<std::int32_t>>();
    return rec;
}

std::string census_record_json(const estimate::CensusRecord& rec) {
    json j;
    j["k"] = rec.k;
    j["seed"] = rec.seed;
    j["sampler"] = field::sampler_name(rec.sampler);
    j["alpha"] = rec.alpha;
    j["count"] = rec.count;
    return j.dump();
}

estimate::CensusRecord parse_census_record(const std::string& line) {
    json j = json::parse(line);
    estimate::CensusRecord rec;
    rec.k = j.at("k").get<int>();
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.sampler = field::sampler_from_name(j.at("sampler").get<std::string>());
    rec.alpha = j.at("alpha").get<double>();
    rec.count = j.at("count").get<std::int64_t>();
    return rec;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::string text = read_text_file(path);
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            if (!cur.empty()) lines.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(std::move(cur));
    return lines;
}

void write_field_file(const std::string& path, const field::FieldSample& sample) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    char header[16] = {};
    std::memcpy(header, "LFPPFLD1", 8);
    std::uint32_t k = static_cast<std::uint32_t>(sample.spec.k);
    std::memcpy(header + 8, &k, 4);
    header[12] = static_cast<char>(sample.kind);
    out.write(header, sizeof(header));
    out.write(reinterpret_cast<const char*>(sample.values.data()),
              static_cast<std::streamsize>(sample.values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write failed: " + path);
    out.close();

    json side;
    side["seed"] = sample.seed;
    side["k"] = sample.spec.k;
    side["sampler"] = field::sampler_name(sample.kind);
    side["padding_factor"] = sample.spec.padding_factor;
    side["normalization"] = "zero_domain_mean";
    if (sample.kind == field::SamplerKind::fourier)
        side["calibration_c0"] = field::fourier_calibration_c0(sample.spec.padding_factor);
    write_text_file(path + ".json", side.dump(2) + "\n");
}

field::FieldSample read_field_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    char header[16] = {};
    in.read(header, sizeof(header));
    if (!in || std::memcmp(header, "LFPPFLD1", 8) != 0)
        throw std::invalid_argument("not a LFPPFLD1 field file: " + path);
    std::uint32_t k = 0;
    std::memcpy(&k, header + 8, 4);
    auto kind = static_cast<field::SamplerKind>(header[12]);
    if (kind != field::SamplerKind::exact_dgff && kind != field::SamplerKind::fourier &&
        kind != field::SamplerKind::layered)
        throw std::invalid_argument("field file has an unknown sampler tag");

    field::FieldSample sample;
    sample.kind = kind;
    sample.spec = field::make_grid(static_cast<int>(k));
    std::size_t count =
        static_cast<std::size_t>(sample.spec.n_per_side) * sample.spec.n_per_side;
    sample.values.resize(count);
    in.read(reinterpret_cast<char*>(sample.values.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw std::invalid_argument("field file truncated: " + path);

    std::ifstream side(path + ".json");
    if (side) {
        json j = json::parse(side);
        sample.seed = j.value("seed", 0ULL);
        sample.spec.padding_factor = j.value("padding_factor", 1.0);
    }
    return sample;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace lfpp::io
