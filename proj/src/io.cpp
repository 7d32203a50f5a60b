#include "thosvd/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "tensor binary format assumes a little-endian host");

namespace thosvd {

namespace {

constexpr char kMagic[4] = {'T', 'H', 'O', 'S'};
constexpr std::uint32_t kVersion = 1;

std::ofstream open_out(const std::string& path, std::ios::openmode mode) {
    std::ofstream f(path, mode);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    return f;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode) {
    std::ifstream f(path, mode);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    return f;
}

template <typename T>
void write_raw(std::ofstream& f, const T& value) {
    f.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& f) {
    T value;
    f.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!f) throw std::runtime_error("truncated tensor file");
    return value;
}

} // namespace

void save_tensor_binary(const DenseTensor& t, const std::string& path) {
    std::ofstream f = open_out(path, std::ios::binary);
    f.write(kMagic, 4);
    write_raw(f, kVersion);
    write_raw(f, static_cast<std::uint32_t>(t.order()));
    for (std::size_t n = 0; n < t.order(); ++n)
        write_raw(f, static_cast<std::uint64_t>(t.shape().dim(n)));
    f.write(reinterpret_cast<const char*>(t.data().data()),
            static_cast<std::streamsize>(t.numel() * sizeof(double)));
    if (!f) throw std::runtime_error("write failed: " + path);
}

DenseTensor load_tensor_binary(const std::string& path) {
    std::ifstream f = open_in(path, std::ios::binary);
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("not a tensor file: " + path);
    if (read_raw<std::uint32_t>(f) != kVersion)
        throw std::runtime_error("unsupported tensor file version: " + path);
    const std::uint32_t order = read_raw<std::uint32_t>(f);
    if (order == 0) throw std::runtime_error("tensor file with zero order: " + path);
    std::vector<std::size_t> dims(order);
    for (auto& d : dims) d = static_cast<std::size_t>(read_raw<std::uint64_t>(f));
    Shape shape(dims);
    std::vector<double> data(shape.numel());
    f.read(reinterpret_cast<char*>(data.data()),
           static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!f) throw std::runtime_error("truncated tensor file: " + path);
    return DenseTensor(std::move(shape), std::move(data));
}

void save_tensor_text(const DenseTensor& t, const std::string& path) {
    std::ofstream f = open_out(path, std::ios::out);
    f << t.order();
    for (std::size_t n = 0; n < t.order(); ++n) f << ' ' << t.shape().dim(n);
    f << '\n';
    char buf[64];
    for (double v : t.data()) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", v);
        f << buf;
    }
    if (!f) throw std::runtime_error("write failed: " + path);
}

DenseTensor load_tensor_text(const std::string& path) {
    std::ifstream f = open_in(path, std::ios::in);
    std::size_t order = 0;
    if (!(f >> order) || order == 0)
        throw std::runtime_error("bad tensor text header: " + path);
    std::vector<std::size_t> dims(order);
    for (auto& d : dims)
        if (!(f >> d)) throw std::runtime_error("bad tensor text header: " + path);
    Shape shape(dims);
    std::vector<double> data(shape.numel());
    for (double& v : data)
        if (!(f >> v)) throw std::runtime_error("truncated tensor text file: " + path);
    return DenseTensor(std::move(shape), std::move(data));
}

void save_mask(const ObservationMask& mask, const std::string& path) {
    std::ofstream f = open_out(path, std::ios::out);
    f << mask.shape().order();
    for (std::size_t n = 0; n < mask.shape().order(); ++n) f << ' ' << mask.shape().dim(n);
    f << ' ' << mask.count() << '\n';
    for (std::size_t idx : mask.indices()) f << idx << '\n';
    if (!f) throw std::runtime_error("write failed: " + path);
}

ObservationMask load_mask(const std::string& path) {
    std::ifstream f = open_in(path, std::ios::in);
    std::size_t order = 0;
    if (!(f >> order) || order == 0) throw std::runtime_error("bad mask header: " + path);
    std::vector<std::size_t> dims(order);
    for (auto& d : dims)
        if (!(f >> d)) throw std::runtime_error("bad mask header: " + path);
    std::size_t count = 0;
    if (!(f >> count)) throw std::runtime_error("bad mask header: " + path);
    std::vector<std::size_t> indices(count);
    for (auto& idx : indices)
        if (!(f >> idx)) throw std::runtime_error("truncated mask file: " + path);
    return ObservationMask(Shape(dims), std::move(indices));
}

void save_manifest(const GeneratorSpec& spec, const std::string& path) {
    std::ofstream f = open_out(path, std::ios::out);
    f << "family = "
      << (spec.family == GeneratorFamily::Gaussian ? "gaussian" : "powerlaw") << '\n';
    f << "shape =";
    for (std::size_t n = 0; n < spec.shape.order(); ++n) f << ' ' << spec.shape.dim(n);
    f << '\n';
    f << "ranks =";
    for (std::size_t r : spec.ranks.ranks) f << ' ' << r;
    f << '\n';
    f << "seed = " << spec.seed << '\n';
    f << "orthonormalize_factors = " << (spec.orthonormalize_factors ? "true" : "false")
      << '\n';
    if (!f) throw std::runtime_error("write failed: " + path);
}

GeneratorSpec load_manifest(const std::string& path) {
    std::ifstream f = open_in(path, std::ios::in);
    GeneratorSpec spec{GeneratorFamily::Gaussian, Shape({1}), MultilinearRank{{1}}, 0, true};
    std::string line;
    while (std::getline(f, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t\r");
            s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
        };
        trim(key);
        trim(value);
        std::istringstream vs(value);
        if (key == "family") {
            if (value == "gaussian") spec.family = GeneratorFamily::Gaussian;
            else if (value == "powerlaw") spec.family = GeneratorFamily::PowerLaw;
            else throw std::runtime_error("bad manifest family: " + value);
        } else if (key == "shape") {
            std::vector<std::size_t> dims;
            std::size_t d;
            while (vs >> d) dims.push_back(d);
            spec.shape = Shape(dims);
        } else if (key == "ranks") {
            spec.ranks.ranks.clear();
            std::size_t r;
            while (vs >> r) spec.ranks.ranks.push_back(r);
        } else if (key == "seed") {
            vs >> spec.seed;
        } else if (key == "orthonormalize_factors") {
            spec.orthonormalize_factors = (value == "true" || value == "1");
        }
    }
    return spec;
}

} // namespace thosvd
