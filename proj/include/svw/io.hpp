#ifndef SVW_IO_HPP
#define SVW_IO_HPP

// Serialization: fields to CSV or flat binary (header, then interleaved
// (re, im) pairs in k-ascending order, or grid values in x-ascending order),
// trajectory dumps, JSON reports with stable key order, and run manifests.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "svw/config.hpp"
#include "svw/diagnostics.hpp"
#include "svw/field.hpp"
#include "svw/integrator.hpp"

namespace svw {

using json = nlohmann::ordered_json;

namespace detail {

// Shortest round-trippable decimal form, locale-independent.
inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Field serialization

inline void write_spectral_csv(const SpectralField& f, std::ostream& os) {
    os << f.max_freq() << "\n";
    for (int k = -f.max_freq(); k <= f.max_freq(); ++k)
        os << detail::fmt(f.coeff(k).real()) << "," << detail::fmt(f.coeff(k).imag()) << "\n";
}

inline SpectralField read_spectral_csv(std::istream& is) {
    int K;
    if (!(is >> K) || K < 0) throw std::runtime_error("read_spectral_csv: bad header");
    std::vector<cplx> half(std::size_t(K) + 1);
    for (int k = -K; k <= K; ++k) {
        double re, im;
        char comma;
        if (!(is >> re >> comma >> im)) throw std::runtime_error("read_spectral_csv: bad row");
        if (k >= 0) half[std::size_t(k)] = cplx(re, im);
    }
    return SpectralField::from_half_spectrum(std::move(half));
}

inline void write_grid_csv(const GridField& g, std::ostream& os) {
    os << g.size() << "\n";
    for (double v : g.values()) os << detail::fmt(v) << "\n";
}

inline void write_spectral_binary(const SpectralField& f, std::ostream& os) {
    const std::int64_t K = f.max_freq();
    os.write(reinterpret_cast<const char*>(&K), sizeof K);
    for (int k = -f.max_freq(); k <= f.max_freq(); ++k) {
        const double re = f.coeff(k).real(), im = f.coeff(k).imag();
        os.write(reinterpret_cast<const char*>(&re), sizeof re);
        os.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
}

inline SpectralField read_spectral_binary(std::istream& is) {
    std::int64_t K;
    is.read(reinterpret_cast<char*>(&K), sizeof K);
    if (!is || K < 0) throw std::runtime_error("read_spectral_binary: bad header");
    std::vector<cplx> half(std::size_t(K) + 1);
    for (std::int64_t k = -K; k <= K; ++k) {
        double re, im;
        is.read(reinterpret_cast<char*>(&re), sizeof re);
        is.read(reinterpret_cast<char*>(&im), sizeof im);
        if (!is) throw std::runtime_error("read_spectral_binary: truncated stream");
        if (k >= 0) half[std::size_t(k)] = cplx(re, im);
    }
    return SpectralField::from_half_spectrum(std::move(half));
}

// ---------------------------------------------------------------------------
// Trajectory dump

inline void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
    os << "t,norm_R,norm_S,energy,dissipation,mean_R_minus_S,W\n";
    for (std::size_t j = 0; j < traj.states.size(); ++j) {
        const SystemState& st = traj.states[j];
        const auto [E, D] = energy(st);
        os << detail::fmt(st.t) << "," << detail::fmt(norm(st.R, Norm::L2)) << ","
           << detail::fmt(norm(st.S, Norm::L2)) << "," << detail::fmt(E) << ","
           << detail::fmt(D) << "," << detail::fmt(st.R.mean() - st.S.mean()) << ","
           << detail::fmt(traj.w_samples[j]) << "\n";
    }
}

// ---------------------------------------------------------------------------
// Reports and manifests

inline constexpr const char* version_string = "svw 0.1.0";

inline std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << content;
}

// Every artifact directory carries a manifest sufficient to re-run the
// experiment: the fully materialized config, its hash, seed, code version.
inline void write_manifest(const std::filesystem::path& dir, const SimConfig& cfg,
                           const std::string& subcommand) {
    const std::string text = cfg.canonical_text();
    json m;
    m["version"] = version_string;
    m["subcommand"] = subcommand;
    char hash[24];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
    m["config_hash"] = hash;
    m["seed"] = cfg.seed;
    write_file(dir / "manifest.json", m.dump(2) + "\n");
    write_file(dir / "config.ini", text);
}

}  // namespace svw

#endif  // SVW_IO_HPP
