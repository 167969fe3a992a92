#include "ifs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "ifs/dimension.hpp"
#include "ifs/dynamics.hpp"
#include "ifs/osc.hpp"
#include "ifs/raster.hpp"
#include "ifs/scenario.hpp"

namespace ifs {

namespace {

double u01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1p-53; }

double uniform(std::mt19937_64& g, double lo, double hi) { return lo + (hi - lo) * u01(g); }

int uniform_int(std::mt19937_64& g, int lo, int hi) {
    return lo + static_cast<int>(u01(g) * (hi - lo + 1)) % (hi - lo + 1);
}

SpaceBox random_space(std::mt19937_64& g, int dim, bool with_origin) {
    Vec lo = zero_vec();
    Vec hi = zero_vec();
    for (int i = 0; i < dim; ++i) {
        if (with_origin) {
            lo[i] = -uniform(g, 0.4, 2.0);
            hi[i] = uniform(g, 0.4, 2.0);
        } else {
            lo[i] = uniform(g, -2.0, 1.0);
            hi[i] = lo[i] + uniform(g, 0.5, 3.0);
        }
    }
    return SpaceBox(dim, lo, hi);
}

SpaceBox random_cube(std::mt19937_64& g, int dim) {
    const double c = uniform(g, 0.5, 2.0);
    Vec lo = zero_vec();
    Vec hi = zero_vec();
    for (int i = 0; i < dim; ++i) {
        lo[i] = -c;
        hi[i] = c;
    }
    return SpaceBox(dim, lo, hi);
}

// Mild aspect ratio keeps the renderer's 1-cell dilation a coverage
// guarantee (a mapped cell's true image stays within one cell of the
// stamped cell on every axis).
SpaceBox random_near_square_space(std::mt19937_64& g, int dim) {
    const double base = uniform(g, 0.5, 2.5);
    Vec lo = zero_vec();
    Vec hi = zero_vec();
    for (int i = 0; i < dim; ++i) {
        lo[i] = uniform(g, -2.0, 1.0);
        hi[i] = lo[i] + base * uniform(g, 1.0, 1.4);
    }
    return SpaceBox(dim, lo, hi);
}

// Per-axis range of A*x over the box.
void image_range(const Mat& a, const SpaceBox& space, Vec& lo, Vec& hi) {
    const int n = space.dim();
    lo = zero_vec();
    hi = zero_vec();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double p = a[i][j] * space.lower()[j];
            const double q = a[i][j] * space.upper()[j];
            lo[i] += std::min(p, q);
            hi[i] += std::max(p, q);
        }
    }
}

// Samples an offset making x -> Ax + b a self-map; shrinks A when the image
// of the box is wider than the box on some axis.
AffineContraction with_random_offset(std::mt19937_64& g, const SpaceBox& space, Mat a) {
    const int n = space.dim();
    for (int attempt = 0; attempt < 64; ++attempt) {
        Vec ilo;
        Vec ihi;
        image_range(a, space, ilo, ihi);
        bool fits = spectral_norm(a, n) < 0.95;
        for (int i = 0; fits && i < n; ++i) {
            if (ihi[i] - ilo[i] >= space.width(i)) fits = false;
        }
        if (!fits) {
            a = scale_mat(a, 0.8, n);
            continue;
        }
        Vec b = zero_vec();
        for (int i = 0; i < n; ++i) {
            b[i] = uniform(g, space.lower()[i] - ilo[i], space.upper()[i] - ihi[i]);
        }
        return validate_contraction(space, a, b);
    }
    throw IfsError(Errc::InvalidArgument, "offset sampling failed to converge");
}

AffineContraction random_contraction(std::mt19937_64& g, const SpaceBox& space) {
    const int n = space.dim();
    Mat a = zero_mat();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = uniform(g, -0.5, 0.5) / n;
    }
    return with_random_offset(g, space, a);
}

Mat random_rotation_similarity(std::mt19937_64& g, int dim, double ratio) {
    Mat a = identity_mat(dim);
    if (dim == 1) {
        a[0][0] = u01(g) < 0.5 ? ratio : -ratio;
        return a;
    }
    const auto plane_rotation = [&](int p, int q, double angle) {
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        Mat r = identity_mat(dim);
        r[p][p] = c;
        r[p][q] = -s;
        r[q][p] = s;
        r[q][q] = c;
        Mat out = zero_mat();
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                for (int k = 0; k < dim; ++k) out[i][j] += r[i][k] * a[k][j];
            }
        }
        a = out;
    };
    plane_rotation(0, 1, uniform(g, 0.0, 6.283185307179586));
    if (dim == 3) {
        plane_rotation(1, 2, uniform(g, 0.0, 6.283185307179586));
        plane_rotation(0, 2, uniform(g, 0.0, 6.283185307179586));
    }
    return scale_mat(a, ratio, dim);
}

AffineContraction random_similarity(std::mt19937_64& g, const SpaceBox& space) {
    const int n = space.dim();
    const double ratio = uniform(g, 0.05, n == 3 ? 0.4 : 0.5);
    return with_random_offset(g, space, random_rotation_similarity(g, n, ratio));
}

AlphabetPtr random_alphabet(std::mt19937_64& g, const SpaceBox& space, int m) {
    std::vector<std::pair<std::string, AffineContraction>> entries;
    for (int k = 0; k < m; ++k) {
        for (int attempt = 0;; ++attempt) {
            AffineContraction f = random_contraction(g, space);
            bool fresh = true;
            for (const auto& [name, existing] : entries) {
                if (existing.same_coefficients(f)) fresh = false;
            }
            if (fresh || attempt > 16) {
                entries.emplace_back("s" + std::to_string(k), std::move(f));
                break;
            }
        }
    }
    return std::make_shared<const ContractionAlphabet>(space, std::move(entries));
}

IfsSequence random_ep(std::mt19937_64& g, const AlphabetPtr& alphabet, int max_pre = 3,
                      int max_period = 5) {
    const int m = alphabet->size();
    std::vector<int> pre(uniform_int(g, 0, max_pre));
    for (int& s : pre) s = uniform_int(g, 0, m - 1);
    std::vector<int> period(uniform_int(g, 1, max_period));
    for (int& s : period) s = uniform_int(g, 0, m - 1);
    return IfsSequence::eventually_periodic_ids(alphabet, std::move(pre), std::move(period));
}

// The canonical 3-map Sierpinski system on the unit square.
FiniteIfs sierpinski_system() {
    const SpaceBox square(2, zero_vec(), Vec{1.0, 1.0, 0.0});
    Mat half = zero_mat();
    half[0][0] = half[1][1] = 0.5;
    std::vector<std::pair<std::string, AffineContraction>> maps;
    maps.emplace_back("f1", validate_contraction(square, half, zero_vec()));
    maps.emplace_back("f2", validate_contraction(square, half, Vec{0.5, 0.0, 0.0}));
    maps.emplace_back("f3", validate_contraction(square, half, Vec{0.25, 0.5, 0.0}));
    return FiniteIfs(square, std::move(maps));
}

struct PendingCase {
    std::string id;
    std::uint64_t seed = 0;
    std::function<CaseResult(std::mt19937_64&)> body;
};

std::vector<CaseResult> run_cases(std::vector<PendingCase> cases) {
    std::vector<CaseResult> results(cases.size());
    const auto count = static_cast<std::int64_t>(cases.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t i = 0; i < count; ++i) {
        CaseResult r;
        r.id = cases[i].id;
        try {
            std::mt19937_64 g(cases[i].seed);
            r = cases[i].body(g);
            r.id = cases[i].id;
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        results[i] = std::move(r);
    }
    std::sort(results.begin(), results.end(),
              [](const CaseResult& a, const CaseResult& b) { return a.id < b.id; });
    return results;
}

CaseResult bounded_case(double measured, double bound, std::string detail) {
    CaseResult r;
    r.pass = measured <= bound;
    r.measured = measured;
    r.bound = bound;
    r.detail = std::move(detail);
    return r;
}

CaseResult count_case(std::int64_t failures, std::int64_t total, std::string detail) {
    CaseResult r;
    r.pass = failures == 0;
    r.measured = static_cast<double>(failures);
    r.bound = 0.0;
    r.detail = std::move(detail) + " (" + std::to_string(total) + " checks)";
    return r;
}

constexpr double kTail40 = 0x1p-40;

}  // namespace

std::vector<CaseResult> verify_metrics(std::uint64_t seed) {
    std::vector<PendingCase> cases;

    cases.push_back({"metrics/axioms-pointwise", seed + 0, [](std::mt19937_64& g) {
        double worst = 0.0;
        std::int64_t checks = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            const SpaceBox space = random_space(g, uniform_int(g, 1, 3), false);
            const AffineContraction f = random_contraction(g, space);
            const AffineContraction h = random_contraction(g, space);
            const AffineContraction k = random_contraction(g, space);
            for (const bool bounded : {false, true}) {
                const auto d = [&](const AffineContraction& a, const AffineContraction& b) {
                    return bounded ? bounded_distance(a, b, space) : sup_distance(a, b, space);
                };
                const double dfh = d(f, h);
                const double dhf = d(h, f);
                const double dfk = d(f, k);
                const double dhk = d(h, k);
                if (dfh < 0.0) worst = std::max(worst, -dfh);
                if (d(f, f) != 0.0) worst = std::max(worst, d(f, f));
                if (dfh == 0.0 && !f.same_coefficients(h)) worst = std::max(worst, 1.0);
                if (dfh != dhf) worst = std::max(worst, std::abs(dfh - dhf));
                worst = std::max(worst, dfk - (dfh + dhk));
                if (bounded && dfh >= 1.0) worst = std::max(worst, dfh - 1.0 + 1e-9);
                checks += 6;
            }
        }
        return bounded_case(worst, 1e-12, "sup/bounded metric axioms on " +
                                              std::to_string(checks) + " checks");
    }});

    cases.push_back({"metrics/vertex-vs-grid", seed + 1, [](std::mt19937_64& g) {
        double worst = -1.0;
        for (int trial = 0; trial < 100; ++trial) {
            const int dim = uniform_int(g, 1, 3);
            const SpaceBox space = random_space(g, dim, false);
            const AffineContraction f = random_contraction(g, space);
            const AffineContraction h = random_contraction(g, space);
            const double exact = sup_distance(f, h, space);
            Mat diff = zero_mat();
            Vec doff = zero_vec();
            for (int i = 0; i < dim; ++i) {
                doff[i] = f.offset()[i] - h.offset()[i];
                for (int j = 0; j < dim; ++j) diff[i][j] = f.matrix()[i][j] - h.matrix()[i][j];
            }
            const double lipschitz = spectral_norm(diff, dim);
            const int steps = dim == 3 ? 16 : 64;
            double cell2 = 0.0;
            for (int i = 0; i < dim; ++i) {
                const double s = space.width(i) / steps;
                cell2 += 0.25 * s * s;
            }
            const double slack = lipschitz * std::sqrt(cell2);
            double grid = 0.0;
            Vec p = zero_vec();
            const int total = static_cast<int>(std::pow(steps + 1, dim));
            for (int idx = 0; idx < total; ++idx) {
                int rest = idx;
                for (int i = 0; i < dim; ++i) {
                    p[i] = space.lower()[i] + space.width(i) * (rest % (steps + 1)) / steps;
                    rest /= steps + 1;
                }
                grid = std::max(grid, norm2(add(mat_vec(diff, p, dim), doff, dim), dim));
            }
            worst = std::max(worst, grid - exact - 1e-12);
            worst = std::max(worst, exact - grid - slack);
        }
        return bounded_case(worst, 0.0,
                            "vertex supremum vs dense grid sampling, 100 random pairs");
    }});

    cases.push_back({"metrics/similarity-ratio", seed + 2, [](std::mt19937_64& g) {
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const SpaceBox space = random_cube(g, uniform_int(g, 1, 3));
            const AffineContraction f = random_similarity(g, space);
            const int dim = space.dim();
            for (int rep = 0; rep < 20; ++rep) {
                Vec x = zero_vec();
                Vec y = zero_vec();
                for (int i = 0; i < dim; ++i) {
                    x[i] = uniform(g, space.lower()[i], space.upper()[i]);
                    y[i] = uniform(g, space.lower()[i], space.upper()[i]);
                }
                const double base = norm2(sub(x, y, dim), dim);
                if (base < 1e-6) continue;
                const double mapped = norm2(sub(ifs::apply(f, x), ifs::apply(f, y), dim), dim);
                worst = std::max(worst, std::abs(mapped / base - f.ratio()));
            }
        }
        return bounded_case(worst, 1e-10, "measured stretch vs certified similarity ratio");
    }});

    cases.push_back({"metrics/sequence-axioms", seed + 3, [](std::mt19937_64& g) {
        double worst = 0.0;
        double largest = 0.0;
        for (int trial = 0; trial < 200; ++trial) {
            const SpaceBox space = random_space(g, uniform_int(g, 1, 2), false);
            const AlphabetPtr alphabet = random_alphabet(g, space, uniform_int(g, 2, 4));
            const IfsSequence f = random_ep(g, alphabet);
            const IfsSequence h = random_ep(g, alphabet);
            const IfsSequence k = random_ep(g, alphabet);
            const double dfh = sequence_distance(f, h).value;
            const double dhf = sequence_distance(h, f).value;
            const double dfk = sequence_distance(f, k).value;
            const double dhk = sequence_distance(h, k).value;
            if (dfh < 0.0) worst = std::max(worst, -dfh);
            if (dfh != dhf) worst = std::max(worst, std::abs(dfh - dhf));
            worst = std::max(worst, dfk - (dfh + dhk) - 2.0 * kTail40);
            if (sequence_distance(f, f).value != 0.0) worst = std::max(worst, 1.0);
            largest = std::max({largest, dfh + kTail40, dfk + kTail40, dhk + kTail40});
        }
        if (largest >= 1.0) worst = std::max(worst, largest - 1.0 + 1e-9);
        return bounded_case(worst, 0.0, "product metric axioms, 200 random triples, "
                                        "triangle slack 2*tail");
    }});

    cases.push_back({"metrics/theorem1-prefix", seed + 4, [](std::mt19937_64& g) {
        double worst = 0.0;
        for (int trial = 0; trial < 200; ++trial) {
            const SpaceBox space = random_space(g, uniform_int(g, 1, 2), false);
            const AlphabetPtr alphabet = random_alphabet(g, space, 3);
            const int n = 1 + trial % 20;
            std::vector<int> shared(n);
            for (int& s : shared) s = uniform_int(g, 0, 2);
            std::vector<int> fper{uniform_int(g, 0, 2)};
            // Force a difference right after the shared prefix.
            std::vector<int> gper{(fper[0] + 1) % 3};
            std::vector<int> fpre = shared;
            std::vector<int> gpre = shared;
            const IfsSequence f =
                IfsSequence::eventually_periodic_ids(alphabet, std::move(fpre), std::move(fper));
            const IfsSequence h =
                IfsSequence::eventually_periodic_ids(alphabet, std::move(gpre), std::move(gper));
            const DistanceReport d = sequence_distance(f, h);
            worst = std::max(worst, (d.value + d.tail_bound) * std::ldexp(1.0, n) - 1.0);
        }
        return bounded_case(worst, 0.0,
                            "agree-on-n-symbols implies value + tail < 2^-n, n in 1..20");
    }});

    cases.push_back({"metrics/converse-witness", seed + 5, [](std::mt19937_64& g) {
        const SpaceBox space = random_space(g, 1, false);
        const AlphabetPtr alphabet = random_alphabet(g, space, 2);
        const IfsSequence f = IfsSequence::eventually_periodic_ids(alphabet, {}, {0});
        const IfsSequence h = IfsSequence::eventually_periodic_ids(alphabet, {0, 1}, {0});
        const DistanceReport d = sequence_distance(f, h);
        const CompareResult cmp = sequences_equal(f, h);
        CaseResult r = bounded_case(d.value + d.tail_bound, 0.25,
                                    "sequences differing only at index 2: D below 1/4 yet "
                                    "NotEqual at index 2");
        r.pass = r.pass && cmp.outcome == SeqCompare::NotEqual && cmp.index == 2;
        return r;
    }});

    cases.push_back({"metrics/normalize-idempotent", seed + 6, [](std::mt19937_64& g) {
        std::int64_t failures = 0;
        for (int trial = 0; trial < 200; ++trial) {
            const SpaceBox space = random_space(g, 1, false);
            const AlphabetPtr alphabet = random_alphabet(g, space, uniform_int(g, 2, 4));
            const IfsSequence raw = random_ep(g, alphabet, 4, 6);
            const IfsSequence once = normalize(raw).sequence;
            const IfsSequence twice = normalize(once).sequence;
            if (once.preperiod() != twice.preperiod() || once.period() != twice.period()) {
                ++failures;
                continue;
            }
            for (std::uint64_t k = 1; k <= 1000; ++k) {
                if (alphabet->distinct_id(raw.symbol_at(k)) !=
                    alphabet->distinct_id(once.symbol_at(k))) {
                    ++failures;
                    break;
                }
            }
        }
        return count_case(failures, 200, "normalize is idempotent and stream-preserving");
    }});

    cases.push_back({"metrics/distinct-embed-roundtrip", seed + 7, [](std::mt19937_64& g) {
        std::int64_t failures = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const SpaceBox space = random_space(g, uniform_int(g, 1, 2), false);
            const AlphabetPtr alphabet = random_alphabet(g, space, uniform_int(g, 1, 5));
            std::vector<std::pair<std::string, AffineContraction>> maps;
            for (int i = 0; i < alphabet->size(); ++i) {
                maps.emplace_back(alphabet->name(i), alphabet->map(i));
            }
            const FiniteIfs system(space, std::move(maps));
            const FiniteIfs back = distinct_system(embed_finite(system));
            bool same = back.size() == system.size();
            for (int i = 0; same && i < system.size(); ++i) {
                same = back.name(i) == system.name(i) &&
                       back.map(i).same_coefficients(system.map(i));
            }
            if (!same) ++failures;
        }
        return count_case(failures, 100, "distinct_system recovers embed_finite input");
    }});

    return run_cases(std::move(cases));
}

std::vector<CaseResult> verify_shift(std::uint64_t seed) {
    std::vector<PendingCase> cases;

    cases.push_back({"shift/stream-identity", seed + 100, [](std::mt19937_64& g) {
        std::int64_t failures = 0;
        const SpaceBox space = random_space(g, 1, false);
        const AlphabetPtr alphabet = random_alphabet(g, space, 3);
        std::vector<IfsSequence> samples;
        for (int i = 0; i < 20; ++i) samples.push_back(random_ep(g, alphabet));
        samples.push_back(IfsSequence::block_enumeration(alphabet, {"s0", "s1"}));
        samples.push_back(IfsSequence::block_enumeration(alphabet, {"s0", "s1", "s2"}, 7));
        for (const IfsSequence& f : samples) {
            const IfsSequence s = shift(f);
            for (std::uint64_t k = 1; k <= 1000; ++k) {
                if (s.symbol_at(k) != f.symbol_at(k + 1)) {
                    ++failures;
                    break;
                }
            }
        }
        return count_case(failures, static_cast<std::int64_t>(samples.size()),
                          "index(shift F, k) equals index(F, k+1) for k up to 1000");
    }});

    cases.push_back({"shift/discrete-group", seed + 101, [](std::mt19937_64& g) {
        const EvolutionOperator op{EvolutionOperator::Kind::ShiftDiscrete};
        double worst = 0.0;
        std::int64_t failures = 0;
        for (int trial = 0; trial < 50; ++trial) {
            const SpaceBox space = random_space(g, uniform_int(g, 1, 2), false);
            const AlphabetPtr alphabet = random_alphabet(g, space, 3);
            const IfsSequence f = random_ep(g, alphabet);
            const auto n1 = static_cast<double>(uniform_int(g, 0, 30));
            const auto n2 = static_cast<double>(uniform_int(g, 0, 30));
            const GroupPropertyReport rep = verify_group_property(op, f, n1, n2, 0.0);
            worst = std::max(worst, rep.max_coefficient_diff);
            if (!rep.pass()) ++failures;
        }
        CaseResult r = count_case(failures, 50, "shift composition law, exact");
        r.measured = worst;
        return r;
    }});

    cases.push_back({"shift/scale-group", seed + 102, [](std::mt19937_64& g) {
        const EvolutionOperator op{EvolutionOperator::Kind::ScaleExp};
        double worst = 0.0;
        std::int64_t failures = 0;
        for (int trial = 0; trial < 50; ++trial) {
            const SpaceBox space = random_space(g, uniform_int(g, 1, 2), true);
            const AlphabetPtr alphabet = random_alphabet(g, space, 3);
            const IfsSequence f = random_ep(g, alphabet);
            const double t1 = uniform(g, 0.0, 3.0);
            const double t2 = uniform(g, 0.0, 3.0);
            const GroupPropertyReport rep = verify_group_property(op, f, t1, t2, 1e-12);
            worst = std::max(worst, rep.max_coefficient_diff);
            if (!rep.pass()) ++failures;
        }
        CaseResult r = count_case(failures, 50, "exponential scaling composition law");
        r.measured = worst;
        r.bound = 1e-12;
        return r;
    }});

    cases.push_back({"shift/identity-time-zero", seed + 103, [](std::mt19937_64& g) {
        std::int64_t failures = 0;
        for (int trial = 0; trial < 20; ++trial) {
            const SpaceBox space = random_space(g, uniform_int(g, 1, 2), true);
            const AlphabetPtr alphabet = random_alphabet(g, space, 3);
            const IfsSequence f = random_ep(g, alphabet);
            for (const auto kind :
                 {EvolutionOperator::Kind::ShiftDiscrete, EvolutionOperator::Kind::ScaleExp}) {
                if (!verify_group_property({kind}, f, 0.0, 0.0, 0.0).identity_ok) ++failures;
            }
        }
        return count_case(failures, 40, "phi(F,0) = F exactly for both operator kinds");
    }});

    cases.push_back({"shift/distance-identity", seed + 104, [](std::mt19937_64& g) {
        double worst = 0.0;
        std::int64_t failures = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const SpaceBox space = random_space(g, uniform_int(g, 1, 2), false);
            const AlphabetPtr alphabet = random_alphabet(g, space, uniform_int(g, 2, 4));
            const IfsSequence f = random_ep(g, alphabet);
            const IfsSequence h = random_ep(g, alphabet);
            const ShiftIdentityReport rep = shift_distance_identity(f, h, 1e-10);
            worst = std::max(worst, rep.identity_residual);
            if (!rep.pass()) ++failures;
        }
        CaseResult r = count_case(
            failures, 100, "D(nF,nG) = 2 D(F,G) - dbar(f1,g1) and the doubling bound");
        r.measured = worst;
        r.bound = 1e-10 + 2.0 * kTail40;
        return r;
    }});

    cases.push_back({"shift/evolve-matches-iterated-shift", seed + 105, [](std::mt19937_64& g) {
        const EvolutionOperator op{EvolutionOperator::Kind::ShiftDiscrete};
        std::int64_t failures = 0;
        for (int trial = 0; trial < 10; ++trial) {
            const SpaceBox space = random_space(g, 1, false);
            const AlphabetPtr alphabet = random_alphabet(g, space, 3);
            IfsSequence step = random_ep(g, alphabet);
            const IfsSequence f = step;
            for (int n = 0; n <= 50; ++n) {
                const IfsSequence jump = evolve(op, f, static_cast<double>(n));
                if (sequences_equal(jump, step).outcome != SeqCompare::Equal) {
                    ++failures;
                    break;
                }
                step = shift(step);
            }
        }
        return count_case(failures, 10, "phi(F,n) equals n-fold shift for n = 0..50");
    }});

    return run_cases(std::move(cases));
}

std::vector<CaseResult> verify_periodic(std::uint64_t seed) {
    std::vector<PendingCase> cases;

    cases.push_back({"periodic/families", seed + 200, [](std::mt19937_64& g) {
        const SpaceBox space = random_space(g, 1, false);
        const AlphabetPtr alphabet = random_alphabet(g, space, 4);
        std::int64_t failures = 0;
        using Kind = PeriodicityReport::Kind;
        // Fixed: (f,f,f,...)
        const auto fixed = classify_periodicity(
            IfsSequence::eventually_periodic_ids(alphabet, {}, {0}), 100);
        if (fixed.kind != Kind::Fixed || fixed.period != 1) ++failures;
        // Periodic: (overline{f1..fn}) for distinct symbols
        const auto periodic = classify_periodicity(
            IfsSequence::eventually_periodic_ids(alphabet, {}, {0, 1, 2}), 100);
        if (periodic.kind != Kind::Periodic || periodic.period != 3) ++failures;
        // Eventually fixed: (f1,...,fn,f1,f1,...)
        const auto efixed = classify_periodicity(
            IfsSequence::eventually_periodic_ids(alphabet, {0, 1, 2}, {0}), 100);
        if (efixed.kind != Kind::EventuallyFixed || efixed.preperiod != 3) ++failures;
        // Eventually periodic: (g1..gm, overline{f1..fn})
        const auto eperiodic = classify_periodicity(
            IfsSequence::eventually_periodic_ids(alphabet, {3}, {0, 1}), 100);
        if (eperiodic.kind != Kind::EventuallyPeriodic || eperiodic.preperiod != 1 ||
            eperiodic.period != 2) {
            ++failures;
        }
        return count_case(failures, 4, "the four eventually-periodic example families");
    }});

    cases.push_back({"periodic/block-aperiodic", seed + 201, [](std::mt19937_64& g) {
        const SpaceBox space = random_space(g, 1, false);
        const AlphabetPtr alphabet = random_alphabet(g, space, 2);
        const IfsSequence stream = IfsSequence::block_enumeration(alphabet, {"s0", "s1"});
        const IfsSequence cycle = IfsSequence::eventually_periodic_ids(alphabet, {}, {0, 1});
        std::int64_t failures = 0;
        const auto report = classify_periodicity(stream, 1000);
        if (report.kind != PeriodicityReport::Kind::AperiodicUpTo || report.horizon != 1000) {
            ++failures;
        }
        if (classify_periodicity(cycle, 1000).kind != PeriodicityReport::Kind::Periodic) {
            ++failures;
        }
        const FiniteIfs a = distinct_system(stream);
        const FiniteIfs b = distinct_system(cycle);
        bool same = a.size() == 2 && b.size() == 2;
        for (int i = 0; same && i < 2; ++i) same = a.map(i).same_coefficients(b.map(i));
        if (!same) ++failures;
        return count_case(failures, 3,
                          "block enumeration aperiodic up to 1000 yet shares its distinct "
                          "system with the 2-cycle");
    }});

    cases.push_back({"periodic/rotation-n2", seed + 202, [](std::mt19937_64& g) {
        std::int64_t failures = 0;
        for (int n = 2; n <= 4; ++n) {
            const SpaceBox space = random_space(g, 1, false);
            const AlphabetPtr alphabet = random_alphabet(g, space, n);
            std::vector<int> period;
            for (int r = 0; r < n; ++r) {
                for (int i = 0; i < n; ++i) period.push_back((r + i) % n);
            }
            const IfsSequence f =
                IfsSequence::eventually_periodic_ids(alphabet, {}, std::move(period));
            if (sequences_equal(shift_n(f, static_cast<std::uint64_t>(n) * n), f).outcome !=
                SeqCompare::Equal) {
                ++failures;
            }
        }
        return count_case(failures, 3,
                          "concatenated rotations return after n^2 shifts, n = 2,3,4");
    }});

    cases.push_back({"periodic/density", seed + 203, [](std::mt19937_64& g) {
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            const SpaceBox space = random_space(g, uniform_int(g, 1, 2), false);
            const AlphabetPtr alphabet = random_alphabet(g, space, uniform_int(g, 2, 4));
            const IfsSequence f = trial % 5 == 4
                                      ? IfsSequence::block_enumeration(alphabet, {"s0", "s1"})
                                      : random_ep(g, alphabet);
            for (std::uint64_t n = 1; n <= 12; ++n) {
                const IfsSequence trunc = periodic_truncation(f, n);
                const DistanceReport d = sequence_distance(f, trunc);
                worst = std::max(
                    worst, (d.value + d.tail_bound) * std::ldexp(1.0, static_cast<int>(n)) - 1.0);
            }
        }
        return bounded_case(worst, 0.0,
                            "D(F, periodic_truncation(F,n)) < 2^-n for 50 sequences, n = 1..12");
    }});

    cases.push_back({"periodic/distinct-count-bound", seed + 204, [](std::mt19937_64& g) {
        std::int64_t failures = 0;
        for (int trial = 0; trial < 50; ++trial) {
            const SpaceBox space = random_space(g, 1, false);
            const AlphabetPtr alphabet = random_alphabet(g, space, 4);
            std::vector<int> period(uniform_int(g, 1, 6));
            for (int& s : period) s = uniform_int(g, 0, 3);
            const IfsSequence f =
                IfsSequence::eventually_periodic_ids(alphabet, {}, std::move(period));
            const auto report = classify_periodicity(f, 100);
            if (distinct_system(f).size() > static_cast<int>(report.period)) ++failures;
        }
        return count_case(failures, 50, "a period-p point's distinct system has at most p maps");
    }});

    cases.push_back({"periodic/scale-preserves-structure", seed + 205, [](std::mt19937_64& g) {
        const EvolutionOperator op{EvolutionOperator::Kind::ScaleExp};
        std::int64_t failures = 0;
        for (int trial = 0; trial < 20; ++trial) {
            const SpaceBox space = random_space(g, uniform_int(g, 1, 2), true);
            const AlphabetPtr alphabet = random_alphabet(g, space, 3);
            const IfsSequence f = random_ep(g, alphabet);
            const IfsSequence scaled = evolve(op, f, uniform(g, 0.0, 2.0));
            const auto before = classify_periodicity(f, 200);
            const auto after = classify_periodicity(scaled, 200);
            if (before.kind != after.kind || before.preperiod != after.preperiod ||
                before.period != after.period) {
                ++failures;
            }
        }
        return count_case(failures, 20, "scaling preserves classification and (k, p)");
    }});

    return run_cases(std::move(cases));
}

std::vector<CaseResult> verify_dimension(std::uint64_t seed) {
    std::vector<PendingCase> cases;

    cases.push_back({"dimension/moran-residual", seed + 300, [](std::mt19937_64& g) {
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> ratios(uniform_int(g, 1, 6));
            for (double& r : ratios) r = uniform(g, 0.05, 0.9);
            const DimensionReport rep = moran_dimension(ratios);
            double sum = 0.0;
            for (double r : ratios) sum += std::pow(r, rep.s);
            worst = std::max({worst, rep.residual, std::abs(sum - 1.0) - 1e-12});
            if (rep.s < 0.0) worst = std::max(worst, -rep.s);
        }
        return bounded_case(worst, 1e-12, "Moran equation residual over 100 ratio lists");
    }});

    cases.push_back({"dimension/uniform-vs-moran", seed + 301, [](std::mt19937_64& g) {
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const int m = uniform_int(g, 1, 9);
            const double r = uniform(g, 0.05, 0.9);
            const std::vector<double> ratios(m, r);
            worst = std::max(worst,
                             std::abs(uniform_dimension(m, r).s - moran_dimension(ratios).s));
        }
        return bounded_case(worst, 1e-10, "closed form agrees with the bisection solver");
    }});

    cases.push_back({"dimension/moran-monotone", seed + 302, [](std::mt19937_64& g) {
        std::int64_t failures = 0;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> ratios(uniform_int(g, 2, 5));
            for (double& r : ratios) r = uniform(g, 0.1, 0.9);
            const double s0 = moran_dimension(ratios).s;
            ratios[uniform_int(g, 0, static_cast<int>(ratios.size()) - 1)] *= uniform(g, 0.3, 0.8);
            if (!(moran_dimension(ratios).s < s0)) ++failures;
        }
        return count_case(failures, 100, "s strictly decreases when any ratio decreases");
    }});

    cases.push_back({"dimension/sierpinski-exact", seed + 303, [](std::mt19937_64&) {
        const double s = uniform_dimension(3, 0.5).s;
        return bounded_case(std::abs(s - 1.584962500721156), 1e-12,
                            "uniform_dimension(3, 1/2) = log3/log2");
    }});

    cases.push_back({"dimension/evolution-two-path", seed + 304, [](std::mt19937_64& g) {
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const int m = uniform_int(g, 2, 9);
            const double r = uniform(g, 0.05, 0.9);
            const double t = uniform(g, 0.0, 2.0);
            const double scaled = std::exp(-t) * r;
            const double s = uniform_dimension(m, r).s;
            const double by_formula = evolved_dimension(s, r, scaled).s;
            const double by_resolve = uniform_dimension(m, scaled).s;
            worst = std::max(worst, std::abs(by_formula - by_resolve));
        }
        return bounded_case(worst, 1e-10,
                            "evolution formula matches re-solving the scaled Moran equation");
    }});

    cases.push_back({"dimension/scaled-ratio-action", seed + 305, [](std::mt19937_64& g) {
        const EvolutionOperator op{EvolutionOperator::Kind::ScaleExp};
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            const SpaceBox space = random_cube(g, uniform_int(g, 1, 3));
            const AffineContraction f = random_similarity(g, space);
            const double t = uniform(g, 0.0, 2.0);
            const double factor = std::exp(-t);
            const AffineContraction scaled = validate_contraction(
                space, scale_mat(f.matrix(), factor, space.dim()),
                scale_vec(f.offset(), factor, space.dim()));
            worst = std::max(worst, std::abs(scaled.ratio() - op.ratio_action(f.ratio(), t)));
        }
        return bounded_case(worst, 1e-12, "certified ratio of e^-t f equals e^-t ratio(f)");
    }});

    cases.push_back({"dimension/hutchinson-monotone", seed + 306, [](std::mt19937_64& g) {
        std::int64_t failures = 0;
        std::vector<FiniteIfs> systems;
        systems.push_back(sierpinski_system());
        for (int extra = 0; extra < 2; ++extra) {
            const SpaceBox space = random_space(g, 2, false);
            std::vector<std::pair<std::string, AffineContraction>> maps;
            for (int k = 0; k < 3; ++k) {
                maps.emplace_back("m" + std::to_string(k), random_contraction(g, space));
            }
            systems.emplace_back(space, std::move(maps));
        }
        for (const FiniteIfs& system : systems) {
            AttractorRaster current = AttractorRaster::full(system.space(), 128);
            std::int64_t previous = current.occupied_count();
            for (int iter = 0; iter < 40; ++iter) {
                AttractorRaster next = hutchinson_step(current, system);
                const std::int64_t now = next.occupied_count();
                if (now > previous) {
                    ++failures;
                    break;
                }
                if (next == current) break;
                previous = now;
                current = std::move(next);
            }
        }
        return count_case(failures, static_cast<std::int64_t>(systems.size()),
                          "occupancy never grows while iterating from the full raster");
    }});

    cases.push_back({"dimension/chaos-containment", seed + 307, [](std::mt19937_64& g) {
        std::int64_t failures = 0;
        for (int trial = 0; trial < 10; ++trial) {
            const SpaceBox space = trial % 2 == 0 ? random_cube(g, 2)
                                                  : random_near_square_space(g, 2);
            std::vector<std::pair<std::string, AffineContraction>> maps;
            const int m = uniform_int(g, 2, 4);
            for (int k = 0; k < m; ++k) {
                maps.emplace_back("m" + std::to_string(k),
                                  trial % 2 == 0 ? random_similarity(g, space)
                                                 : random_contraction(g, space));
            }
            const FiniteIfs system(space, std::move(maps));
            const AttractorRaster det = attractor_deterministic(system, 128, 80);
            ChaosGameParams params;
            params.resolution = 128;
            params.n_points = 200000;
            params.seed = g();
            const AttractorRaster chaos = attractor_chaos_game(system, params);
            if (!raster_subset(chaos, dilate(det, 1))) ++failures;
        }
        return count_case(failures, 10,
                          "chaos-game cells lie in the 1-cell-dilated deterministic raster");
    }});

    cases.push_back({"dimension/evolved-sierpinski", seed + 308, [](std::mt19937_64&) {
        const FiniteIfs system = sierpinski_system();
        const double t = std::log(2.0);
        const EvolutionOperator op{EvolutionOperator::Kind::ScaleExp};
        double ratio = 0.0;
        if (!system.uniform_similarity(&ratio)) {
            return bounded_case(1.0, 0.0, "Sierpinski system should be a uniform similarity");
        }
        const double s = uniform_dimension(system.size(), ratio).s;
        const double scaled = op.ratio_action(ratio, t);
        const double by_formula = evolved_dimension(s, ratio, scaled).s;
        std::vector<double> scaled_ratios(3, scaled);
        const double by_resolve = moran_dimension(scaled_ratios).s;
        CaseResult r = bounded_case(std::abs(by_formula - by_resolve), 1e-10,
                                    "scale by e^-ln2: dimension halves, two paths agree");
        r.pass = r.pass && std::abs(by_formula - 0.792481250360578) <= 1e-10;
        return r;
    }});

    return run_cases(std::move(cases));
}

std::vector<CaseResult> verify_osc(std::uint64_t seed) {
    std::vector<PendingCase> cases;

    cases.push_back({"osc/sierpinski-satisfied", seed + 400, [](std::mt19937_64&) {
        const OscResult res = osc_check(sierpinski_system());
        CaseResult r = count_case(res.verdict == OscResult::Verdict::Satisfied ? 0 : 1, 1,
                                  res.detail);
        return r;
    }});

    cases.push_back({"osc/overlap-violated", seed + 401, [](std::mt19937_64&) {
        const SpaceBox line(1, zero_vec(), Vec{1.0, 0.0, 0.0});
        Mat a = zero_mat();
        a[0][0] = 0.6;
        std::vector<std::pair<std::string, AffineContraction>> maps;
        maps.emplace_back("f1", validate_contraction(line, a, zero_vec()));
        maps.emplace_back("f2", validate_contraction(line, a, Vec{0.4, 0.0, 0.0}));
        const OscResult res = osc_check(FiniteIfs(line, std::move(maps)));
        const bool ok = res.verdict == OscResult::Verdict::Violated && res.pair_first == 0 &&
                        res.pair_second == 1 && res.has_witness && res.witness[0] > 0.4 &&
                        res.witness[0] < 0.6;
        CaseResult r = count_case(ok ? 0 : 1, 1, res.detail);
        r.measured = res.witness[0];
        return r;
    }});

    cases.push_back({"osc/single-map", seed + 402, [](std::mt19937_64& g) {
        std::int64_t failures = 0;
        for (int trial = 0; trial < 10; ++trial) {
            const SpaceBox space = random_space(g, uniform_int(g, 1, 3), false);
            std::vector<std::pair<std::string, AffineContraction>> maps;
            maps.emplace_back("f", random_contraction(g, space));
            if (osc_check(FiniteIfs(space, std::move(maps))).verdict !=
                OscResult::Verdict::Satisfied) {
                ++failures;
            }
        }
        return count_case(failures, 10, "a single self-map always satisfies the condition");
    }});

    cases.push_back({"osc/subset-closure", seed + 403, [](std::mt19937_64&) {
        const FiniteIfs full = sierpinski_system();
        std::int64_t failures = 0;
        std::int64_t total = 0;
        for (int drop = 0; drop < full.size(); ++drop) {
            std::vector<std::pair<std::string, AffineContraction>> maps;
            for (int i = 0; i < full.size(); ++i) {
                if (i != drop) maps.emplace_back(full.name(i), full.map(i));
            }
            ++total;
            if (osc_check(FiniteIfs(full.space(), std::move(maps))).verdict !=
                OscResult::Verdict::Satisfied) {
                ++failures;
            }
        }
        return count_case(failures, total, "every 2-map subset of a Satisfied system passes");
    }});

    cases.push_back({"osc/shift-preserved", seed + 404, [](std::mt19937_64&) {
        std::int64_t failures = 0;
        const FiniteIfs system = sierpinski_system();
        const IfsSequence f = embed_finite(system);
        for (const std::uint64_t n : {0ull, 1ull, 2ull, 5ull}) {
            if (!osc_preserved_under_shift(f, system.space(), n).pass()) ++failures;
        }
        // Preperiod drop: 4 quarter-corner maps, shift discards the head map.
        const SpaceBox square = system.space();
        Mat half = zero_mat();
        half[0][0] = half[1][1] = 0.5;
        std::vector<std::pair<std::string, AffineContraction>> corner;
        corner.emplace_back("g", validate_contraction(square, half, Vec{0.0, 0.5, 0.0}));
        corner.emplace_back("f1", validate_contraction(square, half, zero_vec()));
        corner.emplace_back("f2", validate_contraction(square, half, Vec{0.5, 0.0, 0.0}));
        corner.emplace_back("f3", validate_contraction(square, half, Vec{0.5, 0.5, 0.0}));
        const ContractionAlphabet alphabet(square, std::move(corner));
        const auto ptr = std::make_shared<const ContractionAlphabet>(alphabet);
        const IfsSequence tail =
            IfsSequence::eventually_periodic_ids(ptr, {0}, {1, 2, 3});
        const ShiftOscReport rep = osc_preserved_under_shift(tail, square, 1);
        if (!rep.pass() || distinct_system(shift(tail)).size() != 3) ++failures;
        return count_case(failures, 5, "same open set witnesses every shifted system");
    }});

    cases.push_back({"osc/sat-rotated", seed + 405, [](std::mt19937_64&) {
        const SpaceBox square(2, Vec{-1.0, -1.0, 0.0}, Vec{1.0, 1.0, 0.0});
        const double c = 0.3 * std::cos(0.7853981633974483);
        Mat rot = zero_mat();
        rot[0][0] = c;
        rot[0][1] = -c;
        rot[1][0] = c;
        rot[1][1] = c;
        std::int64_t failures = 0;
        {
            std::vector<std::pair<std::string, AffineContraction>> maps;
            maps.emplace_back("left", validate_contraction(square, rot, Vec{-0.5, 0.0, 0.0}));
            maps.emplace_back("right", validate_contraction(square, rot, Vec{0.5, 0.0, 0.0}));
            if (osc_check(FiniteIfs(square, std::move(maps))).verdict !=
                OscResult::Verdict::Satisfied) {
                ++failures;
            }
        }
        {
            std::vector<std::pair<std::string, AffineContraction>> maps;
            maps.emplace_back("left", validate_contraction(square, rot, Vec{-0.2, 0.0, 0.0}));
            maps.emplace_back("right", validate_contraction(square, rot, Vec{0.2, 0.0, 0.0}));
            const FiniteIfs system(square, std::move(maps));
            const OscResult res = osc_check(system);
            bool ok = res.verdict == OscResult::Verdict::Violated && res.has_witness;
            if (ok) {
                // The witness must be interior to both open images.
                for (int i : {res.pair_first, res.pair_second}) {
                    const AffineContraction& f = system.map(i);
                    const double det = f.matrix()[0][0] * f.matrix()[1][1] -
                                       f.matrix()[0][1] * f.matrix()[1][0];
                    const Vec d = sub(res.witness, f.offset(), 2);
                    const Vec u{(f.matrix()[1][1] * d[0] - f.matrix()[0][1] * d[1]) / det,
                                (f.matrix()[0][0] * d[1] - f.matrix()[1][0] * d[0]) / det, 0.0};
                    ok = ok && u[0] > -1.0 && u[0] < 1.0 && u[1] > -1.0 && u[1] < 1.0;
                }
            }
            if (!ok) ++failures;
        }
        return count_case(failures, 2, "separating-axis path: disjoint and overlapping "
                                       "rotated squares");
    }});

    return run_cases(std::move(cases));
}

std::vector<CaseResult> verify_suite(const std::string& suite, std::uint64_t seed) {
    if (suite == "metrics") return verify_metrics(seed);
    if (suite == "shift") return verify_shift(seed);
    if (suite == "periodic") return verify_periodic(seed);
    if (suite == "dimension") return verify_dimension(seed);
    if (suite == "osc") return verify_osc(seed);
    if (suite == "all") {
        std::vector<CaseResult> all;
        for (const auto* name : {"metrics", "shift", "periodic", "dimension", "osc"}) {
            std::vector<CaseResult> part = verify_suite(name, seed);
            all.insert(all.end(), std::make_move_iterator(part.begin()),
                       std::make_move_iterator(part.end()));
        }
        std::sort(all.begin(), all.end(),
                  [](const CaseResult& a, const CaseResult& b) { return a.id < b.id; });
        return all;
    }
    throw IfsError(Errc::InvalidArgument,
                   "unknown suite '" + suite + "' (use all|metrics|shift|periodic|dimension|osc)");
}

bool all_pass(const std::vector<CaseResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CaseResult& r) { return r.pass; });
}

namespace {

std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
    std::string quoted = "\"";
    for (char ch : raw) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

}  // namespace

std::string results_to_csv(const std::vector<CaseResult>& results) {
    std::string out = "case,status,measured,bound,detail\n";
    for (const CaseResult& r : results) {
        out += csv_field(r.id);
        out += r.pass ? ",pass," : ",fail,";
        out += format_g12(r.measured) + "," + format_g12(r.bound) + ",";
        out += csv_field(r.detail) + "\n";
    }
    return out;
}

}  // namespace ifs
