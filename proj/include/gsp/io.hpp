#pragma once

/// Serialization: binary field snapshots, versioned CSV tables, and the
/// line-oriented resonant-set text format.
///
/// Snapshot layout (little-endian throughout):
///   magic "GSP1" (4 bytes), then N, a1, a2, a3, F as five 8-byte doubles,
///   then the coefficients in lexicographic mode order, 4 complex values per
///   mode written as 8 doubles (re, im interleaved).
///
/// CSV: first line "# gsp-csv v1 <schema-name>", second line comma-separated
/// column names, then rows in %.16e scientific notation (17 significant
/// digits: lossless double round-trip).
///
/// Resonant set: comment header with torus parameters, N, certification and
/// count, then one line per ordered triple:
///   "k1 k2 k3 m1 m2 m3 n1 n2 n3 a b c"   with a, b, c in {+1, -1}.

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ios>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsp/field.hpp"
#include "gsp/resonance.hpp"
#include "gsp/torus.hpp"

namespace gsp {

static_assert(std::endian::native == std::endian::little,
              "snapshot serialization assumes a little-endian host");

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Binary snapshots.

inline void write_snapshot(const std::string& path, const TorusSpec& spec,
                           const SpectralField4& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write("GSP1", 4);
    const double header[5] = {static_cast<double>(f.lattice.N), spec.a1, spec.a2, spec.a3,
                              spec.F};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    std::vector<double> buf(8 * f.lattice.size());
    for (std::size_t i = 0; i < f.lattice.size(); ++i)
        for (int c = 0; c < 4; ++c) {
            buf[8 * i + 2 * c] = f.at(i, c).real();
            buf[8 * i + 2 * c + 1] = f.at(i, c).imag();
        }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(double)));
    if (!out) throw IoError("short write: " + path);
}

struct Snapshot {
    TorusSpec spec;  ///< geometry only (a1,a2,a3,F); viscosities are defaults
    SpectralField4 field;
};

inline Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "GSP1", 4) != 0)
        throw IoError("bad snapshot magic in " + path);
    double header[5];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in) throw IoError("truncated snapshot header in " + path);
    const int N = static_cast<int>(header[0]);
    if (N <= 0 || header[0] != static_cast<double>(N))
        throw IoError("bad lattice size in snapshot " + path);
    TorusSpec spec;
    spec.a1 = header[1];
    spec.a2 = header[2];
    spec.a3 = header[3];
    spec.F = header[4];
    const FreqLattice lat(N);
    Snapshot snap{spec, SpectralField4(lat)};
    std::vector<double> buf(8 * lat.size());
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(double)));
    if (!in) throw IoError("truncated snapshot payload in " + path);
    for (std::size_t i = 0; i < lat.size(); ++i)
        for (int c = 0; c < 4; ++c)
            snap.field.at(i, c) = Cplx(buf[8 * i + 2 * c], buf[8 * i + 2 * c + 1]);
    return snap;
}

// ---------------------------------------------------------------------------
// CSV tables.

struct CsvTable {
    std::string schema;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

inline void write_csv(std::ostream& out, const CsvTable& t) {
    out << "# gsp-csv v1 " << t.schema << "\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        out << (c ? "," : "") << t.columns[c];
    out << "\n";
    char num[40];
    for (const std::vector<double>& row : t.rows) {
        if (row.size() != t.columns.size())
            throw IoError("csv row width does not match column count");
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::snprintf(num, sizeof(num), "%.16e", row[c]);
            out << (c ? "," : "") << num;
        }
        out << "\n";
    }
}

inline void write_csv_file(const std::string& path, const CsvTable& t) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_csv(out, t);
    if (!out) throw IoError("short write: " + path);
}

inline CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty csv input");
    const std::string tag = "# gsp-csv v1 ";
    if (line.rfind(tag, 0) != 0) throw IoError("missing gsp-csv v1 header");
    t.schema = line.substr(tag.size());
    if (!std::getline(in, line)) throw IoError("missing csv column header");
    {
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ',')) t.columns.push_back(col);
    }
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != t.columns.size()) throw IoError("ragged csv row");
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    return read_csv(in);
}

// ---------------------------------------------------------------------------
// Resonant-set text format.

inline void write_resonant_set(std::ostream& out, const ResonantSet& set) {
    out << "# gsp-resonances v1\n";
    out << "# torus a1=" << std::setprecision(17) << set.spec.a1 << " a2=" << set.spec.a2
        << " a3=" << set.spec.a3 << " F=" << set.spec.F << "\n";
    out << "# N=" << set.N << " certification="
        << (set.certification == ResonantSet::Certification::ExactRational
                ? "exact-rational"
                : "float-tolerance")
        << " count=" << set.triples.size() << "\n";
    for (const ResonantTriple& t : set.triples) {
        out << t.k[0] << ' ' << t.k[1] << ' ' << t.k[2] << ' ' << t.m[0] << ' ' << t.m[1]
            << ' ' << t.m[2] << ' ' << t.n[0] << ' ' << t.n[1] << ' ' << t.n[2] << ' '
            << (t.sa > 0 ? "+1" : "-1") << ' ' << (t.sb > 0 ? "+1" : "-1") << ' '
            << (t.sc > 0 ? "+1" : "-1") << "\n";
    }
}

inline void write_resonant_set_file(const std::string& path, const ResonantSet& set) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_resonant_set(out, set);
    if (!out) throw IoError("short write: " + path);
}

}  // namespace gsp
