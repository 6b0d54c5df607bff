#pragma once

#include <bit>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "parlp/errors.hpp"
#include "parlp/grid.hpp"

static_assert(std::endian::native == std::endian::little,
              "GFA payloads are little-endian; big-endian hosts are unsupported");

namespace parlp {

/// GFA array file: one UTF-8 JSON header line
///   {"version":1,"n":...,"shape":[...],"L":...,"dtype":"f64","complex":bool,"layout":"row-major"}
/// then a newline, then the raw little-endian float64 payload (interleaved
/// re, im when complex).
inline void write_gfa(const std::string& path, const GridFunction& f, bool as_complex = true) {
    nlohmann::json header;
    header["version"] = 1;
    header["n"] = f.grid.dim;
    std::vector<int> shape(static_cast<std::size_t>(f.grid.dim), f.grid.samples);
    header["shape"] = shape;
    header["L"] = f.grid.length;
    header["dtype"] = "f64";
    header["complex"] = as_complex;
    header["layout"] = "row-major";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("write_gfa: cannot open " + path);
    out << header.dump() << "\n";
    if (as_complex) {
        std::vector<double> payload(f.samples.size() * 2);
        for (std::size_t i = 0; i < f.samples.size(); ++i) {
            payload[2 * i] = f.samples[i].real();
            payload[2 * i + 1] = f.samples[i].imag();
        }
        out.write(reinterpret_cast<const char*>(payload.data()),
                  static_cast<std::streamsize>(payload.size() * sizeof(double)));
    } else {
        std::vector<double> payload(f.samples.size());
        for (std::size_t i = 0; i < f.samples.size(); ++i) payload[i] = f.samples[i].real();
        out.write(reinterpret_cast<const char*>(payload.data()),
                  static_cast<std::streamsize>(payload.size() * sizeof(double)));
    }
    if (!out) throw ConfigError("write_gfa: short write to " + path);
}

inline GridFunction read_gfa(const std::string& path, Side side = Side::physical) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("read_gfa: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("read_gfa: missing header line");
    nlohmann::json header = nlohmann::json::parse(line, nullptr, false);
    if (header.is_discarded()) throw ConfigError("read_gfa: malformed header JSON");
    if (header.value("version", 0) != 1) throw ConfigError("read_gfa: unsupported version");
    if (header.value("dtype", "") != std::string("f64"))
        throw ConfigError("read_gfa: unsupported dtype");
    const int n = header.at("n").get<int>();
    const auto shape = header.at("shape").get<std::vector<int>>();
    if (static_cast<int>(shape.size()) != n) throw ConfigError("read_gfa: shape rank mismatch");
    for (int s : shape)
        if (s != shape[0]) throw ConfigError("read_gfa: non-cubic shapes are unsupported");
    const double L = header.at("L").get<double>();
    const bool is_complex = header.at("complex").get<bool>();

    GridFunction f(PeriodicGrid(n, L, shape[0]), side);
    const std::size_t count = f.samples.size();
    std::vector<double> payload(count * (is_complex ? 2 : 1));
    in.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != payload.size() * sizeof(double))
        throw ConfigError("read_gfa: truncated payload in " + path);
    for (std::size_t i = 0; i < count; ++i)
        f.samples[i] = is_complex ? cplx(payload[2 * i], payload[2 * i + 1])
                                  : cplx(payload[i], 0.0);
    return f;
}

} // namespace parlp
