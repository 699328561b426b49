#include "eternal/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>

namespace eternal {

OrbitEnd classify(const ModelParams& params, double K, const IntegratorOptions& opts) {
    return integrate(launch_from_p0(params, K, opts), params, K, opts).termination;
}

std::vector<GridEntry> classify_grid(const ModelParams& params, const std::vector<double>& Ks,
                                     const IntegratorOptions& opts) {
    std::vector<std::future<OrbitEnd>> jobs;
    jobs.reserve(Ks.size());
    for (double K : Ks) {
        jobs.push_back(std::async(std::launch::async, [&params, &opts, K] {
            return classify(params, K, opts);
        }));
    }
    std::vector<GridEntry> out;
    out.reserve(Ks.size());
    for (std::size_t i = 0; i < Ks.size(); ++i) {
        const OrbitEnd end = jobs[i].get();
        out.push_back({Ks[i], end.tag, end.final_slope});
    }
    return out;
}

std::vector<double> log_grid(double lo, double hi, int count) {
    if (!(lo > 0.0 && hi >= lo) || count < 1) throw std::domain_error("log_grid needs 0 < lo <= hi");
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < count; ++i) out[i] = std::pow(10.0, a + (b - a) * i / (count - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

namespace {

constexpr double kSearchLo = 1e-6;
constexpr double kSearchHi = 1e6;

bool resolved(EndTag tag) { return tag == EndTag::ToQ1 || tag == EndTag::ToQ3; }

IntegratorOptions tightened(IntegratorOptions o) {
    o.rel_tol *= 0.1;
    o.abs_tol *= 0.1;
    o.X_big *= 10.0;
    o.tau_max *= 10.0;
    o.max_steps *= 4;
    return o;
}

class Prober {
public:
    Prober(const ModelParams& params, const IntegratorOptions& opts)
        : params_(params), opts_(opts), retry_(tightened(opts)) {}

    EndTag operator()(double K) {
        ++probes_;
        OrbitEnd end = classify(params_, K, opts_);
        if (!resolved(end.tag)) end = classify(params_, K, retry_);
        if (!resolved(end.tag)) ++unresolved_;
        log_.push_back({K, end.tag, end.final_slope});
        return end.tag;
    }

    int probes() const { return probes_; }
    int unresolved() const { return unresolved_; }
    std::vector<GridEntry> log() const {
        auto out = log_;
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.K < b.K; });
        return out;
    }

private:
    const ModelParams& params_;
    IntegratorOptions opts_;
    IntegratorOptions retry_;
    std::vector<GridEntry> log_;
    int probes_ = 0;
    int unresolved_ = 0;
};

std::string bracket_message(const char* what, double K, EndTag tag) {
    std::ostringstream os;
    os << what << " at K=" << K << " gave " << to_string(tag);
    return os.str();
}

}  // namespace

ClassificationReport find_k_star(const ModelParams& params, double tol_K, const IntegratorOptions& opts,
                                 std::optional<std::pair<double, double>> bracket) {
    if (params.regime() == Regime::Subcritical) {
        throw std::domain_error("find_k_star requires m + p >= 2");
    }
    if (!(tol_K > 0.0)) throw std::domain_error("tol_K must be positive");
    Prober probe(params, opts);

    double lo = 0.0;
    double hi = 0.0;
    if (bracket) {
        lo = bracket->first;
        hi = bracket->second;
        if (!(lo > 0.0 && lo < hi)) throw std::domain_error("bracket must satisfy 0 < K_lo < K_hi");
        if (const EndTag t = probe(lo); t != EndTag::ToQ1) {
            throw NumericalError(bracket_message("lower bracket end", lo, t));
        }
        if (const EndTag t = probe(hi); t != EndTag::ToQ3) {
            throw NumericalError(bracket_message("upper bracket end", hi, t));
        }
    } else {
        double K = 1.0;
        EndTag tag = probe(K);
        while (!resolved(tag) && K < kSearchHi) tag = probe(K *= 10.0);
        if (tag == EndTag::ToQ1) {
            while (tag == EndTag::ToQ1 && K < kSearchHi) {
                lo = K;
                tag = probe(K *= 10.0);
            }
            if (tag != EndTag::ToQ3) throw NumericalError(bracket_message("bracket search", K, tag));
            hi = K;
        } else if (tag == EndTag::ToQ3) {
            while (tag == EndTag::ToQ3 && K > kSearchLo) {
                hi = K;
                tag = probe(K /= 10.0);
            }
            if (tag != EndTag::ToQ1) throw NumericalError(bracket_message("bracket search", K, tag));
            lo = K;
        } else {
            throw NumericalError("no sign change found in [1e-6, 1e6]");
        }
    }

    while (hi - lo >= tol_K * lo) {
        const double candidates[] = {std::sqrt(lo * hi), lo + 0.4 * (hi - lo), lo + 0.6 * (hi - lo)};
        bool moved = false;
        for (double K : candidates) {
            const EndTag tag = probe(K);
            if (tag == EndTag::ToQ1) {
                lo = K;
            } else if (tag == EndTag::ToQ3) {
                hi = K;
            } else {
                continue;
            }
            moved = true;
            break;
        }
        if (!moved) {
            std::ostringstream os;
            os << "bisection stalled on unresolved probes in [" << lo << ", " << hi << "]";
            throw NumericalError(os.str());
        }
    }
    if (probe.unresolved() * 10 > probe.probes()) {
        std::ostringstream os;
        os << probe.unresolved() << " of " << probe.probes() << " probes unresolved";
        throw NumericalError(os.str());
    }

    ClassificationReport report{params, params.regime(), probe.log(), {}, {}, {}, {}, {}, 0, 0, {}};
    report.K_star = 0.5 * (lo + hi);
    report.K_star_bracket = std::make_pair(lo, hi);
    report.alpha_star = alpha_beta_from_k(params, *report.K_star).alpha;
    report.probes = probe.probes();
    report.unresolved = probe.unresolved();
    if (params.regime() == Regime::Critical) {
        const double exact = k_star_critical(params.m());
        report.K_star_exact = exact;
        report.K_star_rel_error = std::abs(*report.K_star - exact) / exact;
    }
    return report;
}

ClassificationReport nonexistence_sweep(const ModelParams& params, const std::vector<double>& Ks,
                                        const IntegratorOptions& opts) {
    if (params.regime() != Regime::Subcritical) {
        throw std::domain_error("nonexistence_sweep requires m + p < 2");
    }
    ClassificationReport report{params, params.regime(), classify_grid(params, Ks, opts),
                                {}, {}, {}, {}, {}, 0, 0, {}};
    std::sort(report.K_grid.begin(), report.K_grid.end(),
              [](const auto& a, const auto& b) { return a.K < b.K; });
    report.probes = static_cast<int>(Ks.size());
    bool all = true;
    for (const auto& e : report.K_grid) {
        if (e.tag == EndTag::Unresolved) {
            ++report.unresolved;
        } else if (e.tag != EndTag::ToQ3) {
            all = false;
        }
    }
    report.all_to_q3 = all;
    return report;
}

}  // namespace eternal
