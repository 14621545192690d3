#ifndef SVW_CONFIG_HPP
#define SVW_CONFIG_HPP

// Flat sectioned key-value configuration for simulation runs. Parsing
// validates everything and reports *all* violations, each with the path of
// the offending key. Defaults are materialized so a manifest written from a
// SimConfig pins every parameter explicitly.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "svw/integrator.hpp"

namespace svw {

struct ModeEntry {
    int freq = 1;
    bool is_sin = true;
    double amplitude = 0.0;
};

struct InitialSpec {
    enum class Kind { modes, random };
    Kind kind = Kind::modes;
    std::vector<ModeEntry> r_modes;
    std::vector<ModeEntry> s_modes;
    double r_mean = 0.0;
    double s_mean = 0.0;
    int band = 8;             // random preset: highest excited frequency
    double amplitude = 0.5;   // random preset: scale of mode 1
    double decay = 2.0;       // random preset: |coeff(k)| ~ amplitude k^{-decay}
    std::uint64_t seed = 1;
};

struct SpeedSpec {
    std::string kind = "cosine";  // constant | cosine | liquid_crystal | tabulated
    double c0 = 1.0;
    double alpha = 1.0;
    double beta = 2.0;
    std::string file;  // two-column CSV (u, c) for tabulated speeds
    std::optional<int> smooth_level;
};

struct SigmaSpec {
    std::string kind = "constant";  // constant | sine
    double value = 0.0;
    double a = 1.0;
    double b = 0.5;
};

struct SimConfig {
    int order = 128;
    int oversample = 4;
    double nu = 0.05;
    double horizon = 0.5;
    double dt = 1e-4;
    std::optional<double> cutoff_k;
    std::uint64_t seed = 1;
    std::size_t sample_cadence = 10;
    std::string output_dir = "out";
    SpeedSpec speed;
    SigmaSpec sigma;
    InitialSpec initial;

    WaveSpeed make_speed() const;
    SigmaProfile make_sigma() const;
    SdeParams make_params() const;
    SystemState make_initial_state() const;
    RunSpec make_run_spec() const;
    int path_depth() const;  // dyadic depth matching dt (noisy runs)
    std::string canonical_text() const;
};

struct ConfigResult {
    std::optional<SimConfig> config;
    std::vector<std::string> issues;
    bool ok() const { return issues.empty() && config.has_value(); }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

inline bool parse_u64(const std::string& s, std::uint64_t& out) {
    try {
        std::size_t pos = 0;
        out = std::stoull(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

inline bool parse_modes(const std::string& text, std::vector<ModeEntry>& out,
                        std::string& error) {
    out.clear();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        std::stringstream es(item);
        std::string shape, freq, amp;
        if (!std::getline(es, shape, ':') || !std::getline(es, freq, ':') ||
            !std::getline(es, amp)) {
            error = "expected entries of the form sin:k:amp or cos:k:amp";
            return false;
        }
        shape = trim(shape);
        ModeEntry e;
        if (shape == "sin") e.is_sin = true;
        else if (shape == "cos") e.is_sin = false;
        else {
            error = "mode shape must be sin or cos, got '" + shape + "'";
            return false;
        }
        double k, a;
        if (!parse_double(trim(freq), k) || k < 1 || k != std::floor(k)) {
            error = "mode frequency must be a positive integer";
            return false;
        }
        if (!parse_double(trim(amp), a)) {
            error = "mode amplitude is not a number";
            return false;
        }
        e.freq = int(k);
        e.amplitude = a;
        out.push_back(e);
    }
    return true;
}

// Keyed gaussian stream distinct from the Brownian draws.
inline double initial_normal(std::uint64_t seed, std::uint64_t idx) {
    return keyed_normal(seed ^ 0xA5A5F00DCAFEBEEFull, idx);
}

}  // namespace detail

inline WaveSpeed SimConfig::make_speed() const {
    WaveSpeed w = WaveSpeed::cosine();
    if (speed.kind == "constant") w = WaveSpeed::constant(speed.c0);
    else if (speed.kind == "cosine") w = WaveSpeed::cosine();
    else if (speed.kind == "liquid_crystal") w = WaveSpeed::liquid_crystal(speed.alpha, speed.beta);
    else if (speed.kind == "tabulated") {
        std::ifstream in(speed.file);
        if (!in) throw std::invalid_argument("speed.file: cannot open '" + speed.file + "'");
        std::vector<double> us, cs;
        std::string line;
        while (std::getline(in, line)) {
            line = detail::trim(line);
            if (line.empty() || line[0] == '#') continue;
            for (auto& ch : line)
                if (ch == ',') ch = ' ';
            std::stringstream ls(line);
            double u, c;
            if (ls >> u >> c) {
                us.push_back(u);
                cs.push_back(c);
            }
        }
        w = WaveSpeed::tabulated(std::move(us), std::move(cs));
    } else
        throw std::invalid_argument("speed.kind: unknown preset '" + speed.kind + "'");
    if (speed.smooth_level) w = w.smoothed(*speed.smooth_level);
    return w;
}

inline SigmaProfile SimConfig::make_sigma() const {
    if (sigma.kind == "constant") return SigmaProfile::constant(sigma.value);
    if (sigma.kind == "sine") return SigmaProfile::sine(sigma.a, sigma.b);
    throw std::invalid_argument("sigma.kind: unknown preset '" + sigma.kind + "'");
}

inline SdeParams SimConfig::make_params() const {
    SdeParams p;
    p.nu = nu;
    p.speed = make_speed();
    p.sigma = make_sigma();
    p.cutoff_k = cutoff_k;
    p.oversample = oversample;
    return p;
}

inline SystemState SimConfig::make_initial_state() const {
    SystemState st;
    st.t = 0.0;
    st.order = order;
    SpectralField R(order - 1), S(order - 1);
    if (initial.kind == InitialSpec::Kind::modes) {
        auto apply = [this](SpectralField& f, const std::vector<ModeEntry>& modes, double mean) {
            f.set_coeff(0, cplx(mean, 0.0));
            for (const auto& e : modes) {
                if (e.freq > order - 1) continue;  // beyond the band: dropped by P_N
                cplx c = f.coeff(e.freq);
                // sin(2 pi k x) has coeff(k) = -i/2; cos(2 pi k x) has 1/2.
                c += e.is_sin ? cplx(0.0, -0.5 * e.amplitude) : cplx(0.5 * e.amplitude, 0.0);
                f.set_coeff(e.freq, c);
            }
        };
        apply(R, initial.r_modes, initial.r_mean);
        apply(S, initial.s_modes, initial.s_mean);
    } else {
        const int band = std::min(initial.band, order - 1);
        for (int k = 1; k <= band; ++k) {
            const double scale =
                initial.amplitude * std::pow(double(k), -initial.decay) / std::sqrt(2.0);
            const auto draw = [&](std::uint64_t stream, std::uint64_t idx) {
                return detail::initial_normal(initial.seed + stream, idx);
            };
            R.set_coeff(k, scale * cplx(draw(0, 2 * k), draw(0, 2 * k + 1)));
            S.set_coeff(k, scale * cplx(draw(1, 2 * k), draw(1, 2 * k + 1)));
        }
        R.set_coeff(0, cplx(initial.r_mean, 0.0));
        S.set_coeff(0, cplx(initial.r_mean, 0.0));  // equal means: mean(R - S) = 0
    }
    st.R = R;
    st.S = S;
    return st;
}

inline RunSpec SimConfig::make_run_spec() const {
    RunSpec spec;
    spec.initial = make_initial_state();
    spec.params = make_params();
    spec.dt = dt;
    spec.horizon = horizon;
    spec.sample_cadence = sample_cadence;
    return spec;
}

inline int SimConfig::path_depth() const {
    if (horizon <= 0.0 || dt <= 0.0) return 0;
    const double n = horizon / dt;
    int depth = 0;
    while ((std::uint64_t(1) << depth) < std::uint64_t(std::llround(n)) && depth < 40) ++depth;
    return depth;
}

inline std::string SimConfig::canonical_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "[run]\n"
       << "order = " << order << "\n"
       << "oversample = " << oversample << "\n"
       << "nu = " << nu << "\n"
       << "T = " << horizon << "\n"
       << "dt = " << dt << "\n";
    if (cutoff_k) os << "cutoff_k = " << *cutoff_k << "\n";
    // output_dir is deliberately left out: the canonical text (and its hash)
    // pins the physics of a run, not where its artifacts land.
    os << "seed = " << seed << "\n"
       << "sample_cadence = " << sample_cadence << "\n";
    os << "[speed]\nkind = " << speed.kind << "\n";
    if (speed.kind == "constant") os << "c0 = " << speed.c0 << "\n";
    if (speed.kind == "liquid_crystal")
        os << "alpha = " << speed.alpha << "\nbeta = " << speed.beta << "\n";
    if (speed.kind == "tabulated") os << "file = " << speed.file << "\n";
    if (speed.smooth_level) os << "smooth_level = " << *speed.smooth_level << "\n";
    os << "[sigma]\nkind = " << sigma.kind << "\n";
    if (sigma.kind == "constant") os << "value = " << sigma.value << "\n";
    if (sigma.kind == "sine") os << "a = " << sigma.a << "\nb = " << sigma.b << "\n";
    os << "[initial]\n";
    if (initial.kind == InitialSpec::Kind::modes) {
        os << "kind = modes\n";
        auto dump = [&os](const char* key, const std::vector<ModeEntry>& modes) {
            os << key << " = ";
            for (std::size_t i = 0; i < modes.size(); ++i) {
                if (i) os << ", ";
                os << (modes[i].is_sin ? "sin" : "cos") << ":" << modes[i].freq << ":"
                   << modes[i].amplitude;
            }
            os << "\n";
        };
        dump("r_modes", initial.r_modes);
        dump("s_modes", initial.s_modes);
        os << "r_mean = " << initial.r_mean << "\ns_mean = " << initial.s_mean << "\n";
    } else {
        os << "kind = random\n"
           << "band = " << initial.band << "\n"
           << "amplitude = " << initial.amplitude << "\n"
           << "decay = " << initial.decay << "\n"
           << "seed = " << initial.seed << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Parser

inline ConfigResult parse_config(const std::string& text) {
    ConfigResult result;
    SimConfig cfg;
    std::vector<std::string>& issues = result.issues;

    std::map<std::string, std::string> kv;
    {
        std::stringstream ss(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(ss, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            if (line.front() == '[' && line.back() == ']') {
                section = detail::trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                issues.push_back("line " + std::to_string(lineno) + ": expected key = value");
                continue;
            }
            const std::string key =
                (section.empty() ? "" : section + ".") + detail::trim(line.substr(0, eq));
            if (kv.count(key)) issues.push_back(key + ": duplicate key");
            kv[key] = detail::trim(line.substr(eq + 1));
        }
    }

    auto take = [&kv](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto take_double = [&](const std::string& key, double& out) {
        if (auto v = take(key)) {
            if (!detail::parse_double(*v, out)) issues.push_back(key + ": not a number: '" + *v + "'");
        }
    };
    auto take_int = [&](const std::string& key, auto& out) {
        double d;
        if (auto v = take(key)) {
            if (!detail::parse_double(*v, d) || d != std::floor(d))
                issues.push_back(key + ": not an integer: '" + *v + "'");
            else
                out = static_cast<std::decay_t<decltype(out)>>(d);
        }
    };

    take_int("run.order", cfg.order);
    take_int("run.oversample", cfg.oversample);
    take_double("run.nu", cfg.nu);
    take_double("run.T", cfg.horizon);
    take_double("run.dt", cfg.dt);
    if (auto v = take("run.cutoff_k")) {
        double k;
        if (!detail::parse_double(*v, k)) issues.push_back("run.cutoff_k: not a number");
        else cfg.cutoff_k = k;
    }
    if (auto v = take("run.seed")) {
        if (!detail::parse_u64(*v, cfg.seed)) issues.push_back("run.seed: not a 64-bit integer");
    }
    take_int("run.sample_cadence", cfg.sample_cadence);
    if (auto v = take("run.output_dir")) cfg.output_dir = *v;

    if (auto v = take("speed.kind")) cfg.speed.kind = *v;
    take_double("speed.c0", cfg.speed.c0);
    take_double("speed.alpha", cfg.speed.alpha);
    take_double("speed.beta", cfg.speed.beta);
    if (auto v = take("speed.file")) cfg.speed.file = *v;
    if (auto v = take("speed.smooth_level")) {
        double d;
        if (!detail::parse_double(*v, d) || d < 1 || d != std::floor(d))
            issues.push_back("speed.smooth_level: not a positive integer");
        else cfg.speed.smooth_level = int(d);
    }

    if (auto v = take("sigma.kind")) cfg.sigma.kind = *v;
    take_double("sigma.value", cfg.sigma.value);
    take_double("sigma.a", cfg.sigma.a);
    take_double("sigma.b", cfg.sigma.b);

    if (auto v = take("initial.kind")) {
        if (*v == "modes") cfg.initial.kind = InitialSpec::Kind::modes;
        else if (*v == "random") cfg.initial.kind = InitialSpec::Kind::random;
        else issues.push_back("initial.kind: must be 'modes' or 'random', got '" + *v + "'");
    }
    for (const char* key : {"initial.r_modes", "initial.s_modes"}) {
        if (auto v = take(key)) {
            std::string err;
            auto& dst = std::string(key) == "initial.r_modes" ? cfg.initial.r_modes
                                                              : cfg.initial.s_modes;
            if (!detail::parse_modes(*v, dst, err)) issues.push_back(std::string(key) + ": " + err);
        }
    }
    take_double("initial.r_mean", cfg.initial.r_mean);
    take_double("initial.s_mean", cfg.initial.s_mean);
    take_int("initial.band", cfg.initial.band);
    take_double("initial.amplitude", cfg.initial.amplitude);
    take_double("initial.decay", cfg.initial.decay);
    if (auto v = take("initial.seed")) {
        if (!detail::parse_u64(*v, cfg.initial.seed))
            issues.push_back("initial.seed: not a 64-bit integer");
    }

    for (const auto& [key, value] : kv) issues.push_back(key + ": unknown key");

    // Semantic validation.
    if (cfg.order < 2) issues.push_back("run.order: must be >= 2");
    if (cfg.oversample < 2) issues.push_back("run.oversample: must be >= 2");
    if (cfg.nu < 0.0) issues.push_back("run.nu: must be >= 0");
    if (cfg.horizon < 0.0) issues.push_back("run.T: must be >= 0");
    if (!(cfg.dt > 0.0)) issues.push_back("run.dt: must be > 0");
    if (cfg.cutoff_k && !(*cfg.cutoff_k > 0.0)) issues.push_back("run.cutoff_k: must be > 0");
    if (cfg.sample_cadence == 0) issues.push_back("run.sample_cadence: must be >= 1");
    if (cfg.sigma.kind == "sine" && !(cfg.sigma.a > std::abs(cfg.sigma.b)))
        issues.push_back("sigma: sine preset requires a > |b|");
    if (cfg.speed.kind != "constant" && cfg.speed.kind != "cosine" &&
        cfg.speed.kind != "liquid_crystal" && cfg.speed.kind != "tabulated")
        issues.push_back("speed.kind: unknown preset '" + cfg.speed.kind + "'");
    if (cfg.sigma.kind != "constant" && cfg.sigma.kind != "sine")
        issues.push_back("sigma.kind: unknown preset '" + cfg.sigma.kind + "'");

    // Zero-mean difference of the initial data.
    if (cfg.initial.kind == InitialSpec::Kind::modes &&
        std::abs(cfg.initial.r_mean - cfg.initial.s_mean) > 1e-14)
        issues.push_back("initial: mean(R0 - S0) must be zero (r_mean must equal s_mean)");

    // Dyadic alignment of dt with T: noisy runs need T/dt to be a power of
    // two so steps land on Brownian-path increments.
    if (cfg.horizon > 0.0 && cfg.dt > 0.0) {
        const double ratio = cfg.horizon / cfg.dt;
        const double n = std::round(ratio);
        const bool integer_steps = std::abs(ratio - n) <= 1e-9 * ratio && n >= 1.0;
        const bool noisy = !(cfg.sigma.kind == "constant" && cfg.sigma.value == 0.0);
        if (!integer_steps || (noisy && (std::uint64_t(n) & (std::uint64_t(n) - 1)) != 0)) {
            const double suggested = cfg.horizon / double(std::uint64_t(1) << std::max(
                                         0, int(std::llround(std::log2(std::max(1.0, ratio))))));
            std::ostringstream os;
            os.precision(17);
            os << "run.dt: does not divide T dyadically; nearest valid dt = " << suggested;
            issues.push_back(os.str());
        }
    }

    if (issues.empty()) result.config = cfg;
    return result;
}

inline ConfigResult parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ConfigResult r;
        r.issues.push_back("cannot open config file '" + path + "'");
        return r;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace svw

#endif  // SVW_CONFIG_HPP
