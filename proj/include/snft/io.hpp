#pragma once
// Serialization layer: group functions as CSV, spectral functions and complex
// matrices as JSON, verdict tables, amplitude clouds, and character tables as
// CSV.  Doubles are emitted with 17 significant digits in CSV and with the
// shortest round-tripping form in JSON, so every emitted file re-ingests to
// bit-identical values.

#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "snft/irreps.hpp"
#include "snft/scattering.hpp"
#include "snft/spectral.hpp"
#include "snft/suppression.hpp"

namespace snft {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string join_ints(const std::vector<int>& v, char sep = ',') {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(v[i]);
    }
    return out;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

inline double parse_double(const std::string& s, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw std::invalid_argument(std::string(what) + ": bad number '" + s + "'");
    return v;
}

inline long long parse_int(const std::string& s, const char* what) {
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str()) throw std::invalid_argument(std::string(what) + ": bad integer '" + s + "'");
    return v;
}

}  // namespace detail

// Columns: rank, cycle notation, re, im; one row per permutation in rank
// order, preceded by a "# n=N" comment and a header row.
inline void write_group_function_csv(std::ostream& os, const GroupFunction& f) {
    os << "# n=" << f.n() << "\n";
    os << "rank,cycles,re,im\n";
    for (std::uint64_t r = 0; r < static_cast<std::uint64_t>(f.size()); ++r) {
        const cplx v = f.at_rank(r);
        os << r << ',' << to_cycles(unrank(r, f.n())) << ',' << format_double(v.real()) << ','
           << format_double(v.imag()) << "\n";
    }
}

inline GroupFunction read_group_function_csv(std::istream& is) {
    int n = -1;
    std::vector<std::pair<std::uint64_t, cplx>> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        if (line[0] == '#') {
            const auto pos = line.find("n=");
            if (pos != std::string::npos)
                n = static_cast<int>(detail::parse_int(line.substr(pos + 2), "group function csv"));
            continue;
        }
        if (!header_seen) {
            header_seen = true;  // column header row
            continue;
        }
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 4)
            throw std::invalid_argument("group function csv: expected 4 columns");
        rows.emplace_back(
            static_cast<std::uint64_t>(detail::parse_int(fields[0], "group function csv")),
            cplx(detail::parse_double(fields[2], "group function csv"),
                 detail::parse_double(fields[3], "group function csv")));
    }
    if (n < 0) {
        n = 1;
        std::uint64_t fn = 1;
        while (fn < rows.size()) fn *= static_cast<std::uint64_t>(++n);
        if (fn != rows.size() || rows.empty())
            throw std::invalid_argument("group function csv: row count is not a factorial");
    }
    GroupFunction f(n);
    std::vector<bool> seen(static_cast<std::size_t>(factorial(n)), false);
    for (const auto& [r, v] : rows) {
        if (r >= static_cast<std::uint64_t>(f.size()))
            throw std::invalid_argument("group function csv: rank out of range");
        if (seen[static_cast<std::size_t>(r)])
            throw std::invalid_argument("group function csv: duplicate rank");
        seen[static_cast<std::size_t>(r)] = true;
        f.set_rank(r, v);
    }
    if (rows.size() != static_cast<std::size_t>(f.size()))
        throw std::invalid_argument("group function csv: missing ranks");
    return f;
}

// { "schema": "snft/1", "n": N, "blocks": { "(lambda)": [[re,im], ...] } }
// with each block flattened row-major.
inline nlohmann::ordered_json spectral_to_json(const SpectralFunction& s, const IrrepTable& t) {
    nlohmann::ordered_json j;
    j["schema"] = "snft/1";
    j["n"] = t.n();
    nlohmann::ordered_json blocks;
    for (int l = 0; l < t.num_irreps(); ++l) {
        nlohmann::ordered_json entries = nlohmann::ordered_json::array();
        const Eigen::MatrixXcd& b = s.blocks[static_cast<std::size_t>(l)];
        for (Eigen::Index r = 0; r < b.rows(); ++r)
            for (Eigen::Index c = 0; c < b.cols(); ++c)
                entries.push_back({b(r, c).real(), b(r, c).imag()});
        blocks[to_string(t.irrep(l).lambda)] = std::move(entries);
    }
    j["blocks"] = std::move(blocks);
    return j;
}

inline void write_spectral_function_json(std::ostream& os, const SpectralFunction& s,
                                         const IrrepTable& t) {
    os << spectral_to_json(s, t).dump(2) << "\n";
}

inline SpectralFunction read_spectral_function_json(std::istream& is, const IrrepTable& t) {
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("spectral json: ") + e.what());
    }
    if (!j.is_object() || j.value("schema", "") != "snft/1")
        throw std::invalid_argument("spectral json: missing schema snft/1");
    if (!j.contains("n") || j["n"].get<int>() != t.n())
        throw std::invalid_argument("spectral json: n does not match the table");
    if (!j.contains("blocks") || !j["blocks"].is_object())
        throw std::invalid_argument("spectral json: missing blocks");

    SpectralFunction s = zero_spectral(t);
    std::size_t used = 0;
    for (int l = 0; l < t.num_irreps(); ++l) {
        const std::string key = to_string(t.irrep(l).lambda);
        if (!j["blocks"].contains(key))
            throw std::invalid_argument("spectral json: missing block " + key);
        const auto& entries = j["blocks"][key];
        Eigen::MatrixXcd& b = s.blocks[static_cast<std::size_t>(l)];
        if (!entries.is_array() || entries.size() != static_cast<std::size_t>(b.size()))
            throw std::invalid_argument("spectral json: block " + key + " has wrong size");
        std::size_t i = 0;
        for (Eigen::Index r = 0; r < b.rows(); ++r)
            for (Eigen::Index c = 0; c < b.cols(); ++c, ++i)
                b(r, c) = cplx(entries[i][0].get<double>(), entries[i][1].get<double>());
        ++used;
    }
    if (j["blocks"].size() != used)
        throw std::invalid_argument("spectral json: unknown extra blocks");
    return s;
}

// Square complex matrix as JSON: either rows of [re,im] pairs or one flat
// row-major list of [re,im] pairs.
inline Eigen::MatrixXcd read_complex_matrix_json(std::istream& is) {
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("matrix json: ") + e.what());
    }
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw std::invalid_argument("matrix json: expected an array of rows or pairs");
    const auto read_pair = [](const nlohmann::json& p) {
        if (!p.is_array() || p.size() != 2)
            throw std::invalid_argument("matrix json: entries must be [re, im] pairs");
        return cplx(p[0].get<double>(), p[1].get<double>());
    };
    if (j[0].size() > 0 && j[0][0].is_array()) {
        const Eigen::Index m = static_cast<Eigen::Index>(j.size());
        Eigen::MatrixXcd u(m, m);
        for (Eigen::Index r = 0; r < m; ++r) {
            if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != m)
                throw std::invalid_argument("matrix json: matrix is not square");
            for (Eigen::Index c = 0; c < m; ++c) u(r, c) = read_pair(j[r][c]);
        }
        return u;
    }
    const std::size_t total = j.size();
    std::size_t m = 0;
    while (m * m < total) ++m;
    if (m * m != total) throw std::invalid_argument("matrix json: flat list is not square");
    Eigen::MatrixXcd u(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < total; ++i)
        u(static_cast<Eigen::Index>(i / m), static_cast<Eigen::Index>(i % m)) = read_pair(j[i]);
    return u;
}

inline void write_complex_matrix_json(std::ostream& os, const Eigen::MatrixXcd& u) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < u.cols(); ++c)
            row.push_back({u(r, c).real(), u(r, c).imag()});
        rows.push_back(std::move(row));
    }
    os << rows.dump(2) << "\n";
}

// Recognized names: "fourier:M", "identity:M", "beamsplitter".
inline std::optional<Eigen::MatrixXcd> builtin_unitary(const std::string& name) {
    const auto sized = [&](const std::string& prefix) -> std::optional<int> {
        if (name.rfind(prefix, 0) != 0) return std::nullopt;
        const long long m = detail::parse_int(name.substr(prefix.size()), "builtin unitary");
        if (m < 1 || m > 64) throw std::invalid_argument("builtin unitary: size out of range");
        return static_cast<int>(m);
    };
    if (name == "beamsplitter") return beamsplitter_matrix();
    if (const auto m = sized("fourier:")) return fourier_matrix(*m);
    if (const auto m = sized("identity:"))
        return Eigen::MatrixXcd::Identity(*m, *m).eval();
    return std::nullopt;
}

inline void write_scan_csv_header(std::ostream& os) {
    os << "input,output,sector,weight,status,witness\n";
}

inline void write_scan_csv_row(std::ostream& os, const OutputEvent& in, const OutputEvent& out,
                               const SuppressionVerdict& v) {
    os << csv_quote(join_ints(in.occupations)) << ',' << csv_quote(join_ints(out.occupations))
       << ',' << csv_quote(to_string(v.sector)) << ',' << format_double(v.weight) << ','
       << to_string(v.status) << ',' << csv_quote(v.witness) << "\n";
}

inline void write_cloud_csv(std::ostream& os, const std::vector<CloudPoint>& cloud) {
    os << "re,im,multiplicity\n";
    for (const CloudPoint& p : cloud)
        os << format_double(p.value.real()) << ',' << format_double(p.value.imag()) << ','
           << p.multiplicity << "\n";
}

// Rows are sectors, columns are conjugacy classes labelled by cycle type;
// the dim column holds d_lambda.
inline void write_character_table_csv(std::ostream& os, const IrrepTable& t) {
    os << "sector,dim";
    for (const Partition& c : t.classes()) os << ',' << csv_quote(to_string(c));
    os << "\n";
    for (int l = 0; l < t.num_irreps(); ++l) {
        os << csv_quote(to_string(t.irrep(l).lambda)) << ',' << t.irrep(l).dim;
        for (int c = 0; c < static_cast<int>(t.classes().size()); ++c)
            os << ',' << t.character_int(l, c);
        os << "\n";
    }
}

}  // namespace snft
