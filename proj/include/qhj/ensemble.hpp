#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "qhj/perturbation.hpp"
#include "qhj/rng.hpp"

namespace qhj {

enum class TauDistribution { uniform_over_cycle };

enum class DegeneracyPolicy { abort, record_and_skip };

struct SamplerParams {
    double a_min = 0.2;
    double a_max = 5.0;
    double rho = 0.95; // safety factor keeping |c| < 2 sqrt(ab)
};

/// Where the ensemble's microstates come from: one fixed triple, or a
/// seeded random set of `count` triples with equal sub-ensembles.
struct MicrostateSource {
    enum class Kind { fixed, random_set };
    Kind kind;
    Microstate fixed_ms;
    int count = 1;
    SamplerParams sampler;

    static MicrostateSource fixed(const Microstate& ms) {
        return {Kind::fixed, ms, 1, {}};
    }
    static MicrostateSource random_set(int count, SamplerParams params = {}) {
        if (count < 1) throw validation_error("MicrostateSource: count must be >= 1");
        return {Kind::random_set, Microstate{1.0, 1.0, 0.0}, count, params};
    }
};

struct EnsembleSpec {
    std::uint64_t n_samples;
    TauDistribution tau_distribution = TauDistribution::uniform_over_cycle;
    MicrostateSource source = MicrostateSource::fixed(Microstate{1.0, 1.0, 0.0});
    std::uint64_t rng_seed = 0;
    ImpulseSpec impulse;
    DegeneracyPolicy policy = DegeneracyPolicy::abort;
};

struct EnsembleReport {
    double mean_e1;
    double stderr_e1;
    std::array<std::uint64_t, 5> case_histogram; // indexed by E1Case
    double copenhagen_e1_original;
    double copenhagen_e1_errata;
    std::uint64_t n;
    std::uint64_t skipped;
    std::vector<double> sub_mean_e1; // per microstate of the set
};

/// Draws one valid microstate: b = 1, a log-uniform, c uniform inside the
/// discriminant bound shrunk by rho. Draws whose trajectory runs
/// retrograde somewhere in the well are rejected and redrawn, since the
/// sheet bookkeeping assumes t(x) increases across a sheet; the screen is
/// scale-free, so checking against the unit well covers every well.
inline Microstate sample_microstate(std::mt19937_64& gen, const SamplerParams& params) {
    if (!(params.a_min > 0.0) || !(params.a_max >= params.a_min))
        throw validation_error("sample_microstate: need 0 < a_min <= a_max");
    if (!(params.rho >= 0.0) || !(params.rho < 1.0))
        throw validation_error("sample_microstate: rho must lie in [0, 1)");
    const WellModel screen = make_well(1.0, 1.0, 1.0);
    for (;;) {
        const double a = std::exp(uniform_in(gen, std::log(params.a_min), std::log(params.a_max)));
        const double b = 1.0;
        const double bound = 2.0 * std::sqrt(a * b) * params.rho;
        const double c = uniform_in(gen, -bound, bound);
        const Microstate ms = make_microstate(a, b, c);
        if (trajectory_is_monotone(screen, ms)) return ms;
    }
}

/// One Monte Carlo draw, for optional per-sample output.
struct SampleRecord {
    std::uint64_t index;
    double tau0;
    double e1;
    E1Case case_id;
    bool skipped;
};

namespace detail {

struct ChunkStats {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::array<std::uint64_t, 5> cases{};
    std::uint64_t skipped = 0;
    std::vector<double> sub_sums;
    std::vector<std::uint64_t> sub_counts;
    std::uint64_t first_failure_index = 0;
    std::string failure;
};

} // namespace detail

/// Monte Carlo average of the trajectory E1 over uniformly random orbit
/// phases, with the two Copenhagen values computed once for comparison.
/// Work is split into fixed-size chunks with per-chunk RNG streams and
/// reduced in chunk order, so the report is bit-identical for any thread
/// count.
inline EnsembleReport run_ensemble(const EnsembleSpec& spec, const WellModel& well, int threads = 1,
                                   std::vector<SampleRecord>* samples = nullptr) {
    if (spec.n_samples < 1) throw validation_error("run_ensemble: n_samples must be >= 1");
    if (threads < 1) threads = 1;
    if (samples) samples->assign(spec.n_samples, SampleRecord{});

    // Stream 0 is reserved for the microstate set; chunks use 1, 2, ...
    std::vector<Microstate> set;
    if (spec.source.kind == MicrostateSource::Kind::fixed) {
        set.push_back(spec.source.fixed_ms);
    } else {
        auto gen = make_stream(spec.rng_seed, 0);
        for (int i = 0; i < spec.source.count; ++i)
            set.push_back(sample_microstate(gen, spec.source.sampler));
    }
    const auto n_set = static_cast<std::uint64_t>(set.size());

    std::vector<double> periods(set.size());
    for (std::size_t i = 0; i < set.size(); ++i)
        periods[i] = TrajectoryClock(well, set[i], 0.0).period();

    constexpr std::uint64_t chunk_size = 4096;
    const std::uint64_t n = spec.n_samples;
    const std::uint64_t n_chunks = (n + chunk_size - 1) / chunk_size;
    std::vector<detail::ChunkStats> chunks(n_chunks);

    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            auto& st = chunks[c];
            st.sub_sums.assign(set.size(), 0.0);
            st.sub_counts.assign(set.size(), 0);
            auto gen = make_stream(spec.rng_seed, c + 1);
            const std::uint64_t lo = c * chunk_size;
            const std::uint64_t hi = std::min(n, lo + chunk_size);
            for (std::uint64_t j = lo; j < hi; ++j) {
                // Equal contiguous sub-ensembles across the microstate set.
                const auto mi = static_cast<std::size_t>(j * n_set / n);
                const double u = uniform01(gen);
                const double tau0 = u * periods[mi];
                double e1;
                E1Case case_id;
                try {
                    const TrajectoryE1 r = trajectory_e1(well, set[mi], spec.impulse, tau0);
                    e1 = r.e1;
                    case_id = r.case_id;
                } catch (const degeneracy_error& err) {
                    if (st.failure.empty() || j < st.first_failure_index) {
                        st.first_failure_index = j;
                        st.failure = err.what();
                    }
                    ++st.skipped;
                    if (samples) (*samples)[j] = {j, tau0, 0.0, E1Case::interior_zero, true};
                    continue;
                }
                if (samples) (*samples)[j] = {j, tau0, e1, case_id, false};
                st.sum += e1;
                st.sum_sq += e1 * e1;
                ++st.cases[static_cast<std::size_t>(case_id)];
                st.sub_sums[mi] += e1;
                ++st.sub_counts[mi];
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Fixed-order reduction keeps floating-point sums reproducible.
    double sum = 0.0, sum_sq = 0.0;
    std::array<std::uint64_t, 5> hist{};
    std::uint64_t skipped = 0;
    std::vector<double> sub_sums(set.size(), 0.0);
    std::vector<std::uint64_t> sub_counts(set.size(), 0);
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
        const auto& st = chunks[c];
        if (!st.failure.empty() && spec.policy == DegeneracyPolicy::abort)
            throw numerical_error("run_ensemble: sample " + std::to_string(st.first_failure_index)
                                  + ": " + st.failure);
        sum += st.sum;
        sum_sq += st.sum_sq;
        for (std::size_t k = 0; k < hist.size(); ++k) hist[k] += st.cases[k];
        skipped += st.skipped;
        for (std::size_t i = 0; i < set.size(); ++i) {
            sub_sums[i] += st.sub_sums[i];
            sub_counts[i] += st.sub_counts[i];
        }
    }

    const std::uint64_t kept = n - skipped;
    if (kept < 2) throw numerical_error("run_ensemble: fewer than 2 usable samples");
    const double mean = sum / static_cast<double>(kept);
    const double var = (sum_sq - static_cast<double>(kept) * mean * mean)
                     / static_cast<double>(kept - 1);
    const double stderr_e1 = std::sqrt(std::max(var, 0.0) / static_cast<double>(kept));

    EnsembleReport rep;
    rep.mean_e1 = mean;
    rep.stderr_e1 = stderr_e1;
    rep.case_histogram = hist;
    rep.copenhagen_e1_original = copenhagen_e1(well, spec.impulse, CopenhagenVariant::original).e1;
    rep.copenhagen_e1_errata = copenhagen_e1(well, spec.impulse, CopenhagenVariant::errata).e1;
    rep.n = kept;
    rep.skipped = skipped;
    rep.sub_mean_e1.resize(set.size());
    for (std::size_t i = 0; i < set.size(); ++i)
        rep.sub_mean_e1[i] = sub_counts[i] ? sub_sums[i] / static_cast<double>(sub_counts[i]) : 0.0;
    return rep;
}

} // namespace qhj
