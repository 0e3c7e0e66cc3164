// Density of the visible points, the distance to a prime approximant, and an
// exact transport problem between two pattern distributions.

#include "amenlab/amenlab.hpp"

#include <iostream>

int main() {
    using namespace amenlab;

    const auto seq = make_box_folner(2, FolnerKind::centered_boxes);
    const Configuration v = visible_points_config();
    const auto trace = upper_density([&v](const GroupPoint& g) { return v(g) != 0; }, seq, {50, 100, 200});
    std::cout << trace.to_csv();

    const Configuration x3 = prime_approx_config(3);
    std::cout << "dbar(v, x3) at n=200: " << to_double(dbar_estimate(v, x3, seq, 200))
              << "  tail bound: " << prime_zeta2_tail(3) << "\n";

    const FiniteSubset w = FiniteSubset::cube(1, 0, 1);
    const Pattern p00{{0, 0}}, p01{{0, 1}}, p11{{1, 1}};
    const PatternDistribution mu(w, {{p00, make_rational(1, 2)}, {p11, make_rational(1, 2)}});
    const PatternDistribution nu(w, {{p01, make_rational(1, 1)}});
    const auto sol = min_cost_transport(mu, nu, hamming_per_site(w.size()));
    std::cout << "transport cost: " << to_string(sol.value)
              << (certify_optimal(sol, hamming_per_site(w.size())) ? " (certified)" : "") << "\n";
}
