#include "pcns/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "pcns/errors.hpp"

namespace pcns {

namespace {

constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
T to_le(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
        std::memcpy(&v, b, sizeof(T));
    }
    return v;
}

template <class T>
void put(std::ofstream& os, T v) {
    v = to_le(v);
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is, const std::filesystem::path& path) {
    T v;
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw InputError("truncated checkpoint: " + path.string());
    return to_le(v);
}

void put_array(std::ofstream& os, const RealBuffer& a) {
    if constexpr (std::endian::native == std::endian::little) {
        os.write(reinterpret_cast<const char*>(a.data()), static_cast<std::streamsize>(a.size() * sizeof(double)));
    } else {
        for (double v : a) put(os, v);
    }
}

void get_array(std::ifstream& is, RealBuffer& a, const std::filesystem::path& path) {
    if constexpr (std::endian::native == std::endian::little) {
        if (!is.read(reinterpret_cast<char*>(a.data()), static_cast<std::streamsize>(a.size() * sizeof(double))))
            throw InputError("truncated checkpoint: " + path.string());
    } else {
        for (double& v : a) v = get<double>(is, path);
    }
}

} // namespace

void write_checkpoint(const std::filesystem::path& path, const State& s, const PulseParams& p) {
    s.validate();
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open checkpoint for writing: " + path.string());
    os.write("PCNS", 4);
    put<std::uint32_t>(os, kVersion);
    const auto n = static_cast<std::uint32_t>(s.grid().n);
    for (int i = 0; i < 3; ++i) put<std::uint32_t>(os, n);
    for (double v : {s.grid().L, p.gamma, p.mu, p.lambda, s.t}) put<double>(os, v);
    put_array(os, s.rho.values);
    for (int c = 0; c < 3; ++c) put_array(os, s.u[c].values);
    if (!os) throw Error("failed writing checkpoint: " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InputError("cannot open checkpoint: " + path.string());
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "PCNS", 4) != 0)
        throw InputError("not a checkpoint file: " + path.string());
    const auto version = get<std::uint32_t>(is, path);
    if (version != kVersion) throw InputError("unsupported checkpoint version " + std::to_string(version));
    std::uint32_t n[3];
    for (auto& v : n) v = get<std::uint32_t>(is, path);
    if (n[0] != n[1] || n[1] != n[2]) throw InputError("checkpoint grid must be cubic");
    double hdr[5];
    for (double& v : hdr) v = get<double>(is, path);
    const Grid g(static_cast<int>(n[0]), hdr[0]);
    Checkpoint ck{State(g), PulseParams{}};
    ck.params.gamma = hdr[1];
    ck.params.mu = hdr[2];
    ck.params.lambda = hdr[3];
    ck.state.t = hdr[4];
    get_array(is, ck.state.rho.values, path);
    for (int c = 0; c < 3; ++c) get_array(is, ck.state.u[c].values, path);
    if (is.peek() != std::char_traits<char>::eof()) throw InputError("trailing bytes in checkpoint: " + path.string());
    return ck;
}

} // namespace pcns
