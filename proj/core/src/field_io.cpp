#include "rotbl/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/os.h>

namespace rotbl {

namespace {

constexpr std::size_t header_size = 64;

std::uint64_t to_le(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
    return v;
}

}  // namespace

void write_field(std::ostream& os, const Field2D& f) {
    const auto& g = *f.grid;
    std::string label = f.label.empty() ? "field" : f.label;
    for (char& c : label)
        if (c == ' ' || c == '\n') c = '_';
    std::string h = fmt::format("ROTBL1 {} {} {:.17g} {:.17g} {}", g.n_x1, g.n_y, g.L, g.Y, label);
    if (h.size() > header_size - 1)
        throw std::invalid_argument(fmt::format("dump header too long for label '{}'", f.label));
    h.resize(header_size - 1, ' ');
    h.push_back('\n');
    os.write(h.data(), header_size);
    for (double v : f.values) {
        std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(v));
        os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
    if (!os) throw std::runtime_error("failed writing field dump");
}

void write_field(const std::filesystem::path& p, const Field2D& f) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error(fmt::format("cannot open {} for writing", p.string()));
    write_field(os, f);
}

Field2D read_field(std::istream& is) {
    char header[header_size];
    is.read(header, header_size);
    if (!is) throw std::runtime_error("truncated field dump header");
    std::istringstream hs(std::string(header, header_size));
    std::string magic, label;
    int n_x1 = 0, n_y = 0;
    double L = 0.0, Y = 0.0;
    hs >> magic >> n_x1 >> n_y >> L >> Y >> label;
    if (magic != "ROTBL1" || !hs) throw std::runtime_error("not a ROTBL1 field dump");
    Field2D f(make_grid(n_x1, n_y, L, Y), label);
    for (double& v : f.values) {
        std::uint64_t bits = 0;
        is.read(reinterpret_cast<char*>(&bits), sizeof bits);
        v = std::bit_cast<double>(to_le(bits));
    }
    if (!is) throw std::runtime_error("truncated field dump data");
    return f;
}

Field2D read_field(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw std::runtime_error(fmt::format("cannot open {}", p.string()));
    return read_field(is);
}

void write_field_csv(const std::filesystem::path& p, const Field2D& f) {
    auto out = fmt::output_file(p.string());
    out.print("x1,y,value\n");
    const auto& g = *f.grid;
    for (int i = 0; i < g.n_x1; ++i)
        for (int j = 0; j < g.n_y; ++j)
            out.print("{:.17g},{:.17g},{:.17g}\n", g.x1_nodes[i], g.y_nodes[j], f(i, j));
}

}  // namespace rotbl
