#include "nsalpha/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "nsalpha/errors.hpp"

namespace nsalpha {
namespace {

constexpr char kMagic[4] = {'N', 'S', 'A', 'F'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 4);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
           (std::uint32_t(b[3]) << 24);
}

void put_f64(std::ostream& os, double v) {
    static_assert(sizeof(double) == 8);
    char b[8];
    std::memcpy(b, &v, 8);  // little-endian host assumed; see docs/formats.md
    os.write(b, 8);
}

double get_f64(std::istream& is) {
    char b[8];
    is.read(b, 8);
    double v;
    std::memcpy(&v, b, 8);
    return v;
}

}  // namespace

void write_snapshot(const std::string& path, const std::vector<SolenoidalField>& fields) {
    if (fields.empty()) throw IoError("write_snapshot: no fields");
    const ModeSet& ms = fields.front().modes();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("write_snapshot: cannot open " + path);
    os.write(kMagic, 4);
    put_u32(os, kVersion);
    put_u32(os, static_cast<std::uint32_t>(ms.dim()));
    put_u32(os, static_cast<std::uint32_t>(ms.n()));
    put_u32(os, static_cast<std::uint32_t>(fields.size()));
    for (const auto& f : fields) {
        require_compatible(f.modes(), ms, "write_snapshot");
        for (std::size_t i = 0; i < ms.size(); ++i)
            for (int c = 0; c < ms.dim(); ++c) {
                const auto z = f.at(c, i);
                put_f64(os, z.real());
                put_f64(os, z.imag());
            }
    }
    if (!os) throw IoError("write_snapshot: write failed for " + path);
}

void write_snapshot(const std::string& path, const SolenoidalField& field) {
    write_snapshot(path, std::vector<SolenoidalField>{field});
}

void write_snapshot(const std::string& path, const Trajectory& traj) {
    write_snapshot(path, traj.fields());
}

std::vector<SolenoidalField> read_snapshot(const std::string& path, ModeSetPtr expected_modes) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("read_snapshot: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("read_snapshot: bad magic in " + path);
    const std::uint32_t version = get_u32(is);
    if (version != kVersion)
        throw IoError("read_snapshot: unsupported version in " + path);
    const int dim = static_cast<int>(get_u32(is));
    const int n = static_cast<int>(get_u32(is));
    const std::uint32_t count = get_u32(is);
    if (!is || count == 0) throw IoError("read_snapshot: truncated header in " + path);

    ModeSetPtr modes = expected_modes ? expected_modes : ModeSet::create(dim, n);
    if (modes->dim() != dim || modes->n() != n)
        throw DimensionError("read_snapshot: snapshot mesh does not match the expected mesh");

    std::vector<SolenoidalField> out;
    out.reserve(count);
    for (std::uint32_t k = 0; k < count; ++k) {
        SpectralField raw(modes);
        for (std::size_t i = 0; i < modes->size(); ++i)
            for (int c = 0; c < dim; ++c) {
                const double re = get_f64(is);
                const double im = get_f64(is);
                raw.at(c, i) = {re, im};
            }
        if (!is) throw IoError("read_snapshot: truncated data in " + path);
        out.push_back(adopt_validated(std::move(raw)));
    }
    return out;
}

SolenoidalField read_snapshot_field(const std::string& path, ModeSetPtr expected_modes) {
    auto fields = read_snapshot(path, std::move(expected_modes));
    if (fields.size() != 1)
        throw IoError("read_snapshot_field: expected exactly one field in " + path);
    return std::move(fields.front());
}

Trajectory read_snapshot_trajectory(const std::string& path, double t0, double t_final,
                                    ModeSetPtr expected_modes) {
    auto fields = read_snapshot(path, std::move(expected_modes));
    return Trajectory(t0, t_final, std::move(fields));
}

}  // namespace nsalpha
