#include <doctest.h>

#include <cmath>

#include "qidlab/errors.hpp"
#include "qidlab/idcodes.hpp"
#include "test_helpers.hpp"

using namespace qidlab;
using namespace qidlab::testutil;

namespace {

IdCode projective_id_code(int d) {
    std::vector<DensityOperator> states;
    std::vector<Mat> tests;
    for (int m = 0; m < d; ++m) {
        states.push_back(DensityOperator::from_vector(ket(m, d)));
        tests.push_back(projector(ket(m, d)));
    }
    return IdCode(make_identity_channel(d), 1, std::move(states), std::move(tests), std::nullopt, true);
}

}  // namespace

TEST_CASE("verify_id_code on orthonormal states with their projectors") {
    const IdErrorReport report = verify_id_code(projective_id_code(4));
    CHECK(report.lambda1_max < 1e-12);
    CHECK(report.lambda2_max < 1e-12);
}

TEST_CASE("verify_id_code on the fully degenerate code") {
    const int n = 3;
    std::vector<DensityOperator> states(static_cast<size_t>(n), DensityOperator::from_vector(ket(0, 2)));
    std::vector<Mat> tests(static_cast<size_t>(n), 0.3 * Mat::Identity(2, 2));
    const IdCode code(make_identity_channel(2), 1, std::move(states), std::move(tests), std::nullopt, true);
    const IdErrorReport report = verify_id_code(code);
    CHECK(report.lambda1_max == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(report.lambda2_max == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(report.lambda1_max + report.lambda2_max == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mixture code from a zero-error basis code and a disjoint family") {
    const TransmissionCode tcode = random_code(make_identity_channel(4), 1, 4, CodeKind::basis,
                                               DecoderKind::pgm, 1);
    SubsetFamily fam;
    fam.ground_M = 4;
    fam.subset_size = 2;
    fam.eps = 0.5;
    fam.lambda = 0.0;
    fam.subsets = {{0, 1}, {2, 3}};
    const IdCode id = build_loeber_code(tcode, fam);
    CHECK_FALSE(id.zero_entropy);
    CHECK(id.simultaneity.has_value());
    const IdErrorReport report = verify_id_code(id);
    CHECK(report.lambda1_max < 1e-12);
    CHECK(report.lambda2_max < 1e-12);
}

TEST_CASE("mixture code cross error equals the overlap fraction exactly") {
    const TransmissionCode tcode = random_code(make_identity_channel(4), 1, 4, CodeKind::basis,
                                               DecoderKind::pgm, 1);
    SubsetFamily fam;
    fam.ground_M = 4;
    fam.subset_size = 2;
    fam.eps = 0.5;
    fam.lambda = 0.5;
    fam.subsets = {{0, 1}, {1, 2}};  // intersection {1}
    const IdCode id = build_loeber_code(tcode, fam);
    const IdErrorReport report = verify_id_code(id);
    CHECK(report.lambda1_max < 1e-12);
    CHECK(report.lambda2_max == doctest::Approx(0.5).epsilon(1e-12));  // overlap / subset size
}

TEST_CASE("mixture code obeys the (lambda, 2 lambda) bounds on noisy fixtures") {
    const int M = 20;
    const double gamma = 0.22;
    const TransmissionCode tcode = smeared_basis_code(M, M, gamma);
    const double lambda = max_error(tcode);  // gamma (1 - 1/M)
    const SubsetFamily fam = generate_family(M, 0.25, 0.2, 8, 5);  // overlap <= 1 of 5
    CHECK(fam.overlap_fraction() <= lambda);
    const IdCode id = build_loeber_code(tcode, fam);
    const IdErrorReport report = verify_id_code(id);
    CHECK(report.lambda1_max <= lambda + tol::fvg);
    CHECK(report.lambda2_max <= 2.0 * lambda + tol::fvg);
    // exact values for this decoder family
    const int L = fam.subset_size;
    CHECK(report.lambda1_max == doctest::Approx(gamma * (1.0 - static_cast<double>(L) / M)).epsilon(1e-10));
    const FamilyCheck check = verify_family(fam);
    const double expected_cross =
        (1.0 - gamma) * check.worst_overlap / L + gamma * static_cast<double>(L) / M;
    CHECK(report.lambda2_max == doctest::Approx(expected_cross).epsilon(1e-10));
}

TEST_CASE("simultaneity witness is validated") {
    const TransmissionCode tcode = random_code(make_identity_channel(4), 1, 4, CodeKind::basis,
                                               DecoderKind::pgm, 1);
    SubsetFamily fam;
    fam.ground_M = 4;
    fam.subset_size = 2;
    fam.eps = 0.5;
    fam.lambda = 0.0;
    fam.subsets = {{0, 1}, {2, 3}};
    IdCode id = build_loeber_code(tcode, fam);
    // tamper with a group: the witness no longer reproduces the test
    auto witness = *id.simultaneity;
    witness.groups[0] = {0, 2};
    CHECK_THROWS_AS(IdCode(id.channel, id.block_n, id.states, id.tests, witness, false), BadParams);
}

TEST_CASE("zero-entropy build on the noiseless disjoint fixture") {
    const TransmissionCode ocode = random_code(make_identity_channel(2), 3, 8, CodeKind::basis,
                                               DecoderKind::pgm, 1);
    SubsetFamily fam;
    fam.ground_M = 8;
    fam.subset_size = 4;
    fam.eps = 0.5;
    fam.lambda = 0.0;
    fam.subsets = {{0, 1, 2, 3}, {4, 5, 6, 7}};
    for (const auto policy : {PhasePolicy::uniform, PhasePolicy::zeros}) {
        const auto [id, stats] = build_zero_entropy_code(ocode, fam, policy, 11, 50);
        CHECK(id.zero_entropy);
        CHECK(stats.delta < 1e-12);
        CHECK(stats.total_rejections() == 0);
        const IdErrorReport report = verify_id_code(id);
        CHECK(report.lambda1_max < 1e-10);
        CHECK(report.lambda2_max < 1e-10);
    }
}

TEST_CASE("superposition cross term equals overlap over subset size") {
    // noiseless basis code; evaluate the construction identity directly
    const int dim = 8, L = 4, c = 2;
    const TransmissionCode ocode = random_code(make_identity_channel(dim), 1, dim, CodeKind::basis,
                                               DecoderKind::pgm, 1);
    const std::vector<int> mj{0, 1, 2, 3}, mk{2, 3, 4, 5};
    Rng rng(55);
    for (int trial = 0; trial < 5; ++trial) {
        Vec phi = Vec::Zero(dim);
        for (int m : mj) phi += std::polar(1.0 / std::sqrt(static_cast<double>(L)), rng.angle()) *
                                 ket(m, dim);
        Mat ek = Mat::Zero(dim, dim);
        for (int m : mk) ek += ocode.decoder.effect(m);
        CHECK(born_raw(projector(phi), ek) ==
              doctest::Approx(static_cast<double>(c) / L).epsilon(1e-12));
    }
}

TEST_CASE("zero-entropy build accepts within thresholds on noisy fixtures") {
    const int M = 8;
    const double gamma = 0.15;
    const TransmissionCode ocode = smeared_basis_code(M, M, gamma);
    const double delta = max_error(ocode);
    SubsetFamily fam;
    fam.ground_M = M;
    fam.subset_size = 4;
    fam.eps = 0.5;
    fam.lambda = 0.5;
    fam.subsets = {{0, 1, 2, 3}, {2, 3, 4, 5}, {4, 5, 6, 7}};
    const auto [id, stats] = build_zero_entropy_code(ocode, fam, PhasePolicy::uniform, 3, 100);
    CHECK(stats.delta == doctest::Approx(delta).epsilon(1e-12));
    const IdErrorReport report = verify_id_code(id);
    CHECK(report.lambda1_max <= 3.0 * delta + 1e-12);
    CHECK(report.lambda2_max <= 5.0 * delta + 1e-12);
    CHECK(id.simultaneity.has_value());
}

TEST_CASE("phase search exhausts when the thresholds are unreachable") {
    const TransmissionCode ocode = random_code(make_identity_channel(4), 1, 4, CodeKind::basis,
                                               DecoderKind::pgm, 1);
    SubsetFamily fam;
    fam.ground_M = 4;
    fam.subset_size = 2;
    fam.eps = 0.5;
    fam.lambda = 0.5;
    fam.subsets = {{0, 1}, {1, 2}};  // overlap 1, but delta = 0
    CHECK_THROWS_AS(build_zero_entropy_code(ocode, fam, PhasePolicy::uniform, 1, 5),
                    PhaseSearchExhausted);
}

TEST_CASE("builder rejects non-orthogonal or mixed inputs") {
    Rng rng(56);
    std::vector<DensityOperator> words{DensityOperator::from_vector(haar_vector(rng, 4)),
                                       DensityOperator::from_vector(haar_vector(rng, 4))};
    std::vector<Mat> effects{0.5 * Mat::Identity(4, 4), 0.5 * Mat::Identity(4, 4)};
    const TransmissionCode skew(make_identity_channel(4), 1, std::move(words), SubPovm(std::move(effects)));
    SubsetFamily fam;
    fam.ground_M = 2;
    fam.subset_size = 1;
    fam.eps = 0.5;
    fam.lambda = 0.0;
    fam.subsets = {{0}, {1}};
    CHECK_THROWS_AS(build_zero_entropy_code(skew, fam, PhasePolicy::uniform, 1, 5), BadParams);
}

TEST_CASE("phase-average identity: the torus mean is the mixture state") {
    const TransmissionCode ocode = random_code(make_identity_channel(2), 3, 8, CodeKind::basis,
                                               DecoderKind::pgm, 1);
    const SubsetFamily fam = generate_family(8, 0.25, 0.5, 6, 9);
    const IdCode mix = build_loeber_code(ocode, fam);
    for (size_t j = 0; j < fam.subsets.size(); ++j) {
        const Mat avg = phase_average_state(ocode, fam.subsets[j]);
        CHECK(op_norm_herm(avg - mix.states[j].mat()) < 1e-9);
    }
}

TEST_CASE("sampled phase means approach the mixture value") {
    const int M = 8;
    const TransmissionCode ocode = perturbed_frame_code(M, M, 0.3, 77);
    SubsetFamily fam;
    fam.ground_M = M;
    fam.subset_size = 4;
    fam.eps = 0.5;
    fam.lambda = 0.25;
    fam.subsets = {{0, 1, 2, 3}, {4, 5, 6, 7}};
    const KrausChannel blocked = ocode.blocked_channel();
    Mat etilde = Mat::Zero(M, M);
    for (int m : fam.subsets[0]) etilde += blocked.adjoint_apply(ocode.decoder.effect(m));
    const Mat rho_mix = phase_average_state(ocode, fam.subsets[0]);
    const double mixture_miss = 1.0 - born_raw(rho_mix, etilde);
    Rng rng(78);
    double mean_miss = 0.0;
    const int samples = 4000;
    const std::vector<Vec> basis = [&] {
        std::vector<Vec> vs;
        for (const auto& w : ocode.codewords) vs.push_back(w.to_vector());
        return vs;
    }();
    for (int t = 0; t < samples; ++t) {
        Vec phi = Vec::Zero(M);
        for (int m : fam.subsets[0]) phi += 0.5 * std::polar(1.0, rng.angle()) * basis[static_cast<size_t>(m)];
        mean_miss += 1.0 - born_raw(projector(phi), etilde);
    }
    mean_miss /= samples;
    CHECK(std::abs(mean_miss - mixture_miss) < 0.02);
}

TEST_CASE("Lipschitz continuity of the phase-to-trace map") {
    const int M = 8, L = 8;
    const TransmissionCode ocode = perturbed_frame_code(M, M, 0.4, 91);
    const KrausChannel blocked = ocode.blocked_channel();
    Mat etilde = Mat::Zero(M, M);
    for (int m = 0; m < L; ++m) etilde += blocked.adjoint_apply(ocode.decoder.effect(m));
    std::vector<Vec> basis;
    for (const auto& w : ocode.codewords) basis.push_back(w.to_vector());

    const double delta = 0.3;
    const double max_dist = delta * delta / (4.0 * 3.14159265358979323846);
    Rng rng(92);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> alpha(L), beta(L);
        for (int m = 0; m < L; ++m) alpha[static_cast<size_t>(m)] = rng.angle();
        // perturb within the weighted l1 ball of radius < max_dist
        const double budget = max_dist * 0.99 * 2.0 * 3.14159265358979323846 * L;
        for (int m = 0; m < L; ++m)
            beta[static_cast<size_t>(m)] = alpha[static_cast<size_t>(m)] +
                                           (rng.uniform01() - 0.5) * 2.0 * budget / L;
        auto x_of = [&](const std::vector<double>& phases) {
            Vec phi = Vec::Zero(M);
            for (int m = 0; m < L; ++m)
                phi += std::polar(1.0 / std::sqrt(static_cast<double>(L)), phases[static_cast<size_t>(m)]) *
                       basis[static_cast<size_t>(m)];
            return 1.0 - born_raw(projector(phi), etilde);
        };
        double dist = 0.0;
        for (int m = 0; m < L; ++m)
            dist += std::abs(alpha[static_cast<size_t>(m)] - beta[static_cast<size_t>(m)]);
        dist /= 2.0 * 3.14159265358979323846 * L;
        REQUIRE(dist < max_dist);
        CHECK(std::abs(x_of(alpha) - x_of(beta)) < delta);
    }
}

TEST_CASE("pure-state trace distance identity for superpositions") {
    const int M = 8, L = 4;
    const TransmissionCode ocode = random_code(make_identity_channel(M), 1, M, CodeKind::basis,
                                               DecoderKind::pgm, 1);
    std::vector<Vec> basis;
    for (const auto& w : ocode.codewords) basis.push_back(w.to_vector());
    Rng rng(93);
    for (int trial = 0; trial < 20; ++trial) {
        Vec a = Vec::Zero(M), b = Vec::Zero(M);
        for (int m = 0; m < L; ++m) {
            a += std::polar(0.5, rng.angle()) * basis[static_cast<size_t>(m)];
            b += std::polar(0.5, rng.angle()) * basis[static_cast<size_t>(m)];
        }
        const double lhs = trace_distance(projector(a), projector(b));
        const double rhs = std::sqrt(std::max(0.0, 1.0 - std::norm(a.dot(b))));
        CHECK(std::abs(lhs - rhs) < tol::fvg);
    }
}

TEST_CASE("concentration statistics on the noiseless disjoint fixture") {
    const TransmissionCode ocode = random_code(make_identity_channel(8), 1, 8, CodeKind::basis,
                                               DecoderKind::pgm, 1);
    SubsetFamily fam;
    fam.ground_M = 8;
    fam.subset_size = 4;
    fam.eps = 0.5;
    fam.lambda = 0.0;
    fam.subsets = {{0, 1, 2, 3}, {4, 5, 6, 7}};
    const ConcentrationStats stats = estimate_concentration(ocode, fam, 0, 0.1, 200, 5);
    CHECK(stats.p_first_tail == 0.0);
    CHECK(stats.p_second_tail_max == 0.0);
    CHECK(stats.median_first < 1e-10);
    CHECK(stats.median_second_max < 1e-10);
}

TEST_CASE("concentration medians obey the Markov bounds on a noisy fixture") {
    const int L = 8, M = 16;
    const TransmissionCode ocode = perturbed_frame_code(M, M, 0.35, 101);
    const double delta = max_error(ocode);
    REQUIRE(delta < 0.45);
    SubsetFamily fam;
    fam.ground_M = M;
    fam.subset_size = L;
    fam.eps = 0.5;
    fam.lambda = 0.0;
    fam.subsets = {{0, 1, 2, 3, 4, 5, 6, 7}, {8, 9, 10, 11, 12, 13, 14, 15}};
    const ConcentrationStats stats = estimate_concentration(ocode, fam, 0, delta, 1000, 6);
    CHECK(stats.mean_first <= delta + 1e-9);
    CHECK(stats.median_first <= 2.0 * delta);
    CHECK(stats.median_second_max <= 4.0 * delta);
    const double ceiling = concentration_ceiling(delta, L);
    const double sigma = std::sqrt(std::max(ceiling * (1.0 - ceiling), 1e-12) / stats.samples);
    CHECK(stats.p_first_tail <= ceiling + 3.0 * sigma);
}

TEST_CASE("size bounds") {
    SUBCASE("direct arithmetic example") {
        const IdCode code = projective_id_code(2);
        IdErrorReport report;
        report.lambda1_max = 0.1;
        report.lambda2_max = 0.1;
        const SizeBoundCheck check = check_size_bounds(code, report);
        CHECK(check.pure_bound == doctest::Approx(1525.87890625).epsilon(1e-12));
        CHECK(check.general_bound == doctest::Approx(std::pow(6.25, 8)).epsilon(1e-12));
        CHECK(check.satisfied);
    }
    SUBCASE("boundary of the trivial regime") {
        const IdCode code = projective_id_code(2);
        IdErrorReport report;
        report.lambda1_max = 0.5;
        report.lambda2_max = 0.5;
        CHECK_THROWS_AS(check_size_bounds(code, report), TrivialRegime);
    }
    SUBCASE("constructed codes satisfy the bound") {
        const TransmissionCode ocode = smeared_basis_code(8, 8, 0.15);
        SubsetFamily fam;
        fam.ground_M = 8;
        fam.subset_size = 4;
        fam.eps = 0.5;
        fam.lambda = 0.5;
        fam.subsets = {{0, 1, 2, 3}, {2, 3, 4, 5}, {4, 5, 6, 7}};
        const auto [id, stats] = build_zero_entropy_code(ocode, fam, PhasePolicy::uniform, 3, 100);
        const SizeBoundCheck check = check_size_bounds(id, verify_id_code(id));
        CHECK(check.satisfied);
        // dimension override matches the in-dimension default here
        const SizeBoundCheck explicit_d = check_size_bounds(id, verify_id_code(id), 8);
        CHECK(explicit_d.log2_pure_bound == check.log2_pure_bound);
    }
}

TEST_CASE("purify_and_extend") {
    SUBCASE("pure code with a trivial ancilla is unchanged") {
        const IdCode code = projective_id_code(2);
        const IdCode out = purify_and_extend(code, 1);
        const IdErrorReport a = verify_id_code(code);
        const IdErrorReport b = verify_id_code(out);
        CHECK(std::abs(a.lambda1_max - b.lambda1_max) < 1e-12);
        CHECK(std::abs(a.lambda2_max - b.lambda2_max) < 1e-12);
    }
    SUBCASE("mixed qubit code extends with an identical report") {
        Rng rng(61);
        std::vector<DensityOperator> states;
        std::vector<Mat> tests;
        for (int j = 0; j < 3; ++j) {
            states.push_back(DensityOperator(random_density(rng, 2)));
            tests.push_back(random_effect(rng, 2));
        }
        const IdCode code(make_identity_channel(2), 1, std::move(states), std::move(tests), std::nullopt,
                          false);
        const IdCode out = purify_and_extend(code, 2);
        CHECK(out.zero_entropy);
        for (const auto& s : out.states) CHECK(s.is_pure());
        CHECK(out.channel.in_dim() == 4);
        CHECK(out.channel.out_dim() == 2);
        const IdErrorReport a = verify_id_code(code);
        const IdErrorReport b = verify_id_code(out);
        CHECK(std::abs(a.lambda1_max - b.lambda1_max) < 1e-9);
        CHECK(std::abs(a.lambda2_max - b.lambda2_max) < 1e-9);
    }
    SUBCASE("maximally mixed state purifies to a maximally entangled one") {
        std::vector<DensityOperator> states{DensityOperator(0.5 * Mat::Identity(2, 2)),
                                            DensityOperator::from_vector(ket(0, 2))};
        std::vector<Mat> tests{0.5 * Mat::Identity(2, 2), projector(ket(0, 2))};
        const IdCode code(make_identity_channel(2), 1, std::move(states), std::move(tests), std::nullopt,
                          false);
        const IdCode out = purify_and_extend(code, 2);
        const Mat marginal = partial_trace(out.states[0].mat(), 2, 2, 2);
        CHECK(op_norm_herm(marginal - 0.5 * Mat::Identity(2, 2)) < 1e-9);
    }
    SUBCASE("rank above the ancilla capacity is rejected") {
        std::vector<DensityOperator> states{DensityOperator(0.5 * Mat::Identity(2, 2))};
        std::vector<Mat> tests{0.5 * Mat::Identity(2, 2)};
        const IdCode code(make_identity_channel(2), 1, std::move(states), std::move(tests), std::nullopt,
                          false);
        CHECK_THROWS_AS(purify_and_extend(code, 1), RankTooHigh);
    }
}

TEST_CASE("id code JSON round trip reproduces the verification") {
    const TransmissionCode ocode = smeared_basis_code(8, 8, 0.1);
    SubsetFamily fam;
    fam.ground_M = 8;
    fam.subset_size = 4;
    fam.eps = 0.5;
    fam.lambda = 0.25;
    fam.subsets = {{0, 1, 2, 3}, {4, 5, 6, 7}};
    const auto [id, stats] = build_zero_entropy_code(ocode, fam, PhasePolicy::uniform, 13, 100);
    const IdCode back = IdCode::from_json(json::parse(id.to_json().dump()));
    const IdErrorReport a = verify_id_code(id);
    const IdErrorReport b = verify_id_code(back);
    CHECK(std::abs(a.lambda1_max - b.lambda1_max) < tol::fvg);
    CHECK(std::abs(a.lambda2_max - b.lambda2_max) < tol::fvg);
    CHECK(back.simultaneity.has_value());
}
