#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "qfp/channels.hpp"
#include "qfp/framebound.hpp"
#include "qfp/rng.hpp"

using namespace qfp;
using Catch::Approx;

namespace {

constexpr double kRoot3 = 1.7320508075688772935;

std::vector<PauliObservable> single_qubit_family() {
    return {parse_observable("X1", 1), parse_observable("Y1", 1), parse_observable("Z1", 1)};
}

Matrix random_hermitian(int dim, Rng& rng) {
    Matrix m(dim);
    for (int i = 0; i < dim; ++i) {
        m.at(i, i) = rng.normal();
        for (int j = i + 1; j < dim; ++j) {
            const std::complex<double> v{rng.normal(), rng.normal()};
            m.at(i, j) = v;
            m.at(j, i) = std::conj(v);
        }
    }
    return m;
}

// test-side oracle: dominant |eigenvalue| by power iteration on M^2
double power_iteration_opnorm(const Matrix& m, Rng& rng) {
    const Matrix m2 = m * m;
    std::vector<std::complex<double>> v(static_cast<std::size_t>(m.dim));
    for (auto& x : v) x = {rng.normal(), rng.normal()};
    double lambda = 0.0;
    for (int it = 0; it < 3000; ++it) {
        std::vector<std::complex<double>> w(v.size(), {0.0, 0.0});
        for (int i = 0; i < m.dim; ++i)
            for (int j = 0; j < m.dim; ++j)
                w[static_cast<std::size_t>(i)] += m2.at(i, j) * v[static_cast<std::size_t>(j)];
        double norm = 0.0;
        for (const auto& x : w) norm += std::norm(x);
        norm = std::sqrt(norm);
        lambda = norm;
        for (auto& x : w) x /= norm;
        v = std::move(w);
    }
    return std::sqrt(lambda);
}

Matrix single_qubit_unitary(double a, double b, double c) {
    Circuit circ(1);
    circ.append(Gate::rz(0, a));
    circ.append(Gate::ry(0, b));
    circ.append(Gate::rz(0, c));
    return circuit_unitary(circ);
}

// brute-force oracle for 1-qubit channels: minimize |<psi|U^dag V|psi>| over
// the Bloch sphere on a dense grid
double bloch_grid_diamond(const Matrix& u, const Matrix& v) {
    const Matrix w = adjoint(u) * v;
    double best = 1.0;
    const int n_theta = 400, n_phi = 800;
    for (int i = 0; i <= n_theta; ++i) {
        const double theta = kPi * i / n_theta;
        const double c = std::cos(theta / 2), s = std::sin(theta / 2);
        for (int j = 0; j < n_phi; ++j) {
            const double phi = 2.0 * kPi * j / n_phi;
            const std::complex<double> a0{c, 0.0};
            const std::complex<double> a1 = std::polar(s, phi);
            const std::complex<double> val =
                std::conj(a0) * (w.at(0, 0) * a0 + w.at(0, 1) * a1) +
                std::conj(a1) * (w.at(1, 0) * a0 + w.at(1, 1) * a1);
            best = std::min(best, std::abs(val));
        }
    }
    return 2.0 * std::sqrt(std::max(0.0, 1.0 - best * best));
}

}  // namespace

TEST_CASE("pauli_matrix") {
    SECTION("single-qubit Z") {
        const Matrix z = pauli_matrix(parse_observable("Z1", 1));
        CHECK(z.at(0, 0) == std::complex<double>{1.0, 0.0});
        CHECK(z.at(1, 1) == std::complex<double>{-1.0, 0.0});
        CHECK(z.at(0, 1) == std::complex<double>{0.0, 0.0});
    }
    SECTION("Z1Z2 is diag(1,-1,-1,1)") {
        const Matrix zz = pauli_matrix(parse_observable("Z1Z2", 2));
        const double expected[] = {1.0, -1.0, -1.0, 1.0};
        for (int i = 0; i < 4; ++i) CHECK(zz.at(i, i).real() == expected[i]);
    }
    SECTION("X1 on two qubits flips the low index bit") {
        const Matrix x1 = pauli_matrix(parse_observable("X1", 2));
        CHECK(x1.at(0, 1) == std::complex<double>{1.0, 0.0});
        CHECK(x1.at(1, 0) == std::complex<double>{1.0, 0.0});
        CHECK(x1.at(2, 3) == std::complex<double>{1.0, 0.0});
        CHECK(x1.at(0, 2) == std::complex<double>{0.0, 0.0});
    }
    SECTION("matches simulator expectations on random states") {
        Rng rng(2718);
        const Circuit c = kernel_circuit(ChannelSpec::honest(), {0.4, 1.2}, {1.1, 0.3});
        const Statevector sv = run_circuit(c, Statevector::zero(2));
        for (const PauliObservable& obs : observable_family(FamilyTier::Tier3)) {
            const Matrix m = pauli_matrix(obs);
            std::complex<double> acc{0.0, 0.0};
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    acc += std::conj(sv.amplitudes[static_cast<std::size_t>(i)]) * m.at(i, j) *
                           sv.amplitudes[static_cast<std::size_t>(j)];
            CHECK(acc.real() == Approx(pauli_expectation_exact(sv, obs)).margin(1e-12));
        }
    }
}

TEST_CASE("hermitian_opnorm") {
    SECTION("diag(1,-1) has norm 1") {
        CHECK(hermitian_opnorm(pauli_matrix(parse_observable("Z1", 1))) == Approx(1.0).margin(1e-12));
    }
    SECTION("(X+Y+Z)/sqrt(3) has norm 1") {
        Matrix m(2);
        for (const char* label : {"X1", "Y1", "Z1"})
            m = m + (std::complex<double>{1.0 / kRoot3, 0.0} * pauli_matrix(parse_observable(label, 1)));
        CHECK(hermitian_opnorm(m) == Approx(1.0).margin(1e-10));
    }
    SECTION("0.5 X1 + 0.5 X2 is block-additive") {
        const Matrix m = (std::complex<double>{0.5, 0.0} * pauli_matrix(parse_observable("X1", 2))) +
                         (std::complex<double>{0.5, 0.0} * pauli_matrix(parse_observable("X2", 2)));
        CHECK(hermitian_opnorm(m) == Approx(1.0).margin(1e-10));
    }
    SECTION("non-Hermitian input is rejected") {
        Matrix m(2);
        m.at(0, 1) = {1.0, 0.0};
        CHECK_THROWS_AS(hermitian_opnorm(m), std::invalid_argument);
    }
    SECTION("agrees with power iteration on random Hermitian 4x4 matrices") {
        Rng rng(5150);
        for (int rep = 0; rep < 25; ++rep) {
            const Matrix m = random_hermitian(4, rng);
            CHECK(hermitian_opnorm(m) == Approx(power_iteration_opnorm(m, rng)).margin(1e-8));
        }
    }
    SECTION("eigenvalues are sorted and reproduce the trace") {
        Rng rng(11);
        const Matrix m = random_hermitian(4, rng);
        const auto w = hermitian_eigenvalues(m);
        double trace = 0.0;
        for (int i = 0; i < 4; ++i) trace += m.at(i, i).real();
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < w.size(); ++i) CHECK(w[i] <= w[i + 1]);
        for (double x : w) sum += x;
        CHECK(sum == Approx(trace).margin(1e-10));
    }
}

TEST_CASE("frame_bound_analytic_local is sqrt(3) for any width") {
    CHECK(frame_bound_analytic_local(1) == Approx(kRoot3));
    CHECK(frame_bound_analytic_local(2) == Approx(kRoot3));
    CHECK(frame_bound_analytic_local(4) == Approx(kRoot3));
    CHECK_THROWS_AS(frame_bound_analytic_local(0), std::invalid_argument);
}

TEST_CASE("frame_bound_numeric") {
    SECTION("single-qubit Pauli family converges to sqrt(3)") {
        Rng rng(17);
        const FrameBoundResult result = frame_bound_numeric(single_qubit_family(), 50, 1500, rng);
        CHECK(result.c_estimate == Approx(kRoot3).margin(1e-3));
        CHECK(result.restarts_used == 50);
        CHECK(result.objective_trace.size() == 50);
    }
    SECTION("two-qubit local family stays at sqrt(3)") {
        Rng rng(18);
        const FrameBoundResult result =
            frame_bound_numeric(observable_family(FamilyTier::Complete), 50, 1500, rng);
        CHECK(result.c_estimate == Approx(kRoot3).margin(1e-2));
    }
    SECTION("witness coefficients reproduce the estimate") {
        Rng rng(19);
        const auto family = observable_family(FamilyTier::Complete);
        const FrameBoundResult result = frame_bound_numeric(family, 30, 1500, rng);
        std::vector<Matrix> mats;
        for (const auto& obs : family) mats.push_back(pauli_matrix(obs));
        CHECK(frame_bound_objective(result.witness_coefficients, mats) ==
              Approx(result.c_estimate).margin(1e-9));
    }
    SECTION("objective is scale invariant") {
        Rng rng(20);
        std::vector<Matrix> mats;
        for (const auto& obs : observable_family(FamilyTier::Tier2))
            mats.push_back(pauli_matrix(obs));
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<double> c;
            for (std::size_t i = 0; i < mats.size(); ++i) c.push_back(rng.normal());
            const double f = frame_bound_objective(c, mats);
            std::vector<double> scaled = c;
            const double s = 0.1 + rng.uniform() * 10.0;
            for (double& x : scaled) x *= s;
            CHECK(frame_bound_objective(scaled, mats) == Approx(f).margin(1e-9));
        }
    }
    SECTION("deterministic given the seed") {
        Rng rng_a(21), rng_b(21);
        const auto family = single_qubit_family();
        const FrameBoundResult a = frame_bound_numeric(family, 10, 500, rng_a);
        const FrameBoundResult b = frame_bound_numeric(family, 10, 500, rng_b);
        CHECK(a.c_estimate == b.c_estimate);
        CHECK(a.objective_trace == b.objective_trace);
    }
    SECTION("C is non-decreasing along the family tiers") {
        Rng rng(22);
        const double c_weak =
            frame_bound_numeric(observable_family(FamilyTier::Weak), 5, 500, rng).c_estimate;
        const double c_complete =
            frame_bound_numeric(observable_family(FamilyTier::Complete), 30, 1500, rng).c_estimate;
        const double c_tier2 =
            frame_bound_numeric(observable_family(FamilyTier::Tier2), 30, 1500, rng).c_estimate;
        const double c_tier3 =
            frame_bound_numeric(observable_family(FamilyTier::Tier3), 30, 1500, rng).c_estimate;
        CHECK(c_weak == Approx(1.0).margin(1e-6));
        CHECK(c_weak <= c_complete + 1e-9);
        CHECK(c_complete <= c_tier2 + 1e-9);
        CHECK(c_tier2 <= c_tier3 + 1e-9);
    }
    SECTION("empty family is rejected") {
        Rng rng(23);
        CHECK_THROWS_AS(frame_bound_numeric({}, 10, 100, rng), std::invalid_argument);
    }
}

TEST_CASE("normal_eigenvalues") {
    SECTION("eigenphases of S x S") {
        Circuit c(2);
        c.append(Gate::s(0));
        c.append(Gate::s(1));
        const auto eigs = normal_eigenvalues(circuit_unitary(c));
        // expected multiset {1, i, i, -1}
        int ones = 0, is = 0, minus = 0;
        for (const auto& e : eigs) {
            if (std::abs(e - std::complex<double>{1.0, 0.0}) < 1e-9) ++ones;
            if (std::abs(e - std::complex<double>{0.0, 1.0}) < 1e-9) ++is;
            if (std::abs(e - std::complex<double>{-1.0, 0.0}) < 1e-9) ++minus;
        }
        CHECK(ones == 1);
        CHECK(is == 2);
        CHECK(minus == 1);
    }
    SECTION("unit modulus for random circuit unitaries") {
        Rng rng(31);
        Circuit c(2);
        c.append(Gate::h(0));
        c.append(Gate::rz(0, 0.3));
        c.append(Gate::cx(0, 1));
        c.append(Gate::ry(1, 1.1));
        c.append(Gate::p(0, -0.8));
        for (const auto& e : normal_eigenvalues(circuit_unitary(c)))
            CHECK(std::abs(std::abs(e) - 1.0) < 1e-9);
    }
}

TEST_CASE("diamond_distance_unitary") {
    const Matrix eye2 = Matrix::identity(2);
    Circuit s1(1);
    s1.append(Gate::s(0));
    const Matrix s_mat = circuit_unitary(s1);

    SECTION("identical channels have distance 0") {
        CHECK(diamond_distance_unitary(s_mat, s_mat) == Approx(0.0).margin(1e-9));
    }
    SECTION("I versus S is sqrt(2)") {
        CHECK(diamond_distance_unitary(eye2, s_mat) == Approx(std::sqrt(2.0)).margin(1e-12));
    }
    SECTION("I x I versus S x S is 2 (hull contains the origin)") {
        Circuit ss(2);
        ss.append(Gate::s(0));
        ss.append(Gate::s(1));
        CHECK(diamond_distance_unitary(Matrix::identity(4), circuit_unitary(ss)) ==
              Approx(2.0).margin(1e-12));
    }
    SECTION("symmetric and global-phase invariant") {
        Rng rng(41);
        for (int rep = 0; rep < 10; ++rep) {
            const Matrix u = single_qubit_unitary(rng.normal(), rng.normal(), rng.normal());
            const Matrix v = single_qubit_unitary(rng.normal(), rng.normal(), rng.normal());
            const double d = diamond_distance_unitary(u, v);
            CHECK(diamond_distance_unitary(v, u) == Approx(d).margin(1e-10));
            const Matrix u_phased = std::polar(1.0, rng.uniform() * 6.28) * u;
            CHECK(diamond_distance_unitary(u_phased, v) == Approx(d).margin(1e-9));
        }
    }
    SECTION("agrees with the Bloch-grid oracle on random single-qubit pairs") {
        Rng rng(43);
        for (int rep = 0; rep < 8; ++rep) {
            const Matrix u = single_qubit_unitary(rng.normal(), rng.normal(), rng.normal());
            const Matrix v = single_qubit_unitary(rng.normal(), rng.normal(), rng.normal());
            CHECK(diamond_distance_unitary(u, v) == Approx(bloch_grid_diamond(u, v)).margin(2e-3));
        }
    }
    SECTION("non-unitary input is rejected") {
        Matrix m(2);
        m.at(0, 0) = {0.5, 0.0};
        CHECK_THROWS_AS(diamond_distance_unitary(eye2, m), std::invalid_argument);
        CHECK_THROWS_AS(diamond_distance_unitary(eye2, Matrix::identity(4)),
                        std::invalid_argument);
    }
}

TEST_CASE("soundness: observable deviations are bounded by the diamond distance") {
    Rng rng(53);
    const FeatureVector xi{0.4, 1.2}, xj{1.1, 0.3};
    const Circuit honest = kernel_circuit(ChannelSpec::honest(), xi, xj);
    const Statevector honest_state = run_circuit(honest, Statevector::zero(2));
    const Matrix honest_u = circuit_unitary(honest);
    const auto family = observable_family(FamilyTier::Complete);

    for (int rep = 0; rep < 100; ++rep) {
        DriftParams params;
        params.alpha = {(rng.uniform() - 0.5) * 1.2, (rng.uniform() - 0.5) * 1.2};
        params.beta = {(rng.uniform() - 0.5) * 1.2, (rng.uniform() - 0.5) * 1.2};
        const Circuit drifted = kernel_circuit(ChannelSpec::drifted(params), xi, xj);
        const Statevector drifted_state = run_circuit(drifted, Statevector::zero(2));
        const double d_diamond = diamond_distance_unitary(honest_u, circuit_unitary(drifted));
        for (const PauliObservable& obs : family) {
            const double dev = std::abs(pauli_expectation_exact(honest_state, obs) -
                                        pauli_expectation_exact(drifted_state, obs));
            CHECK(dev <= d_diamond + 1e-9);
        }
    }
}
