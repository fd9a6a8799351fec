#pragma once

#include "gibbs/hamiltonian.hpp"
#include "gibbs/operator.hpp"

#include <map>
#include <vector>

namespace gibbs {

// Throws NotAState unless rho is Hermitian, unit trace and positive
// semidefinite, each to 1e-10.
void require_state(const Operator& rho, const char* context);

// Natural logarithms throughout.
double von_neumann_entropy(const Operator& rho);

double umegaki(const Operator& rho, const Operator& sigma);

// Tr[rho log(rho^{1/2} sigma^{-1} rho^{1/2})]
double bs_entropy(const Operator& rho, const Operator& sigma);

// (q-1)^{-1} log Tr[sigma^{1/2} (sigma^{-1/2} rho sigma^{-1/2})^q sigma^{1/2}], q > 1
double geometric_renyi(const Operator& rho, const Operator& sigma, double q);
std::vector<double> geometric_renyi(const Operator& rho, const Operator& sigma, const std::vector<double>& qs);

// || sigma^{-1} rho - 1 ||
double upper_bound_norm(const Operator& rho, const Operator& sigma);

inline const std::vector<double>& default_q_grid() {
    static const std::vector<double> grid{1.01, 1.1, 1.5, 2.0};
    return grid;
}

struct DivergenceReport {
    double umegaki = 0.0;
    double bs = 0.0;
    std::map<double, double> geometric_renyi;
    double upper_bound_norm = 0.0;

    // umegaki <= bs <= geometric_renyi[q] <= upper_bound_norm for every q.
    bool chain_holds(double slack = 1e-9) const;
};

DivergenceReport divergence_report(const Operator& rho, const Operator& sigma,
                                   const std::vector<double>& qs = default_q_grid());

// Mutual-information family between disjoint regions A and C of a state.
// Each is the corresponding divergence of rho_AC from rho_A (x) rho_C.
double mutual_information(const Operator& state, const Sites& a, const Sites& c);
double bs_mutual_information(const Operator& state, const Sites& a, const Sites& c);
double geometric_renyi_mi(const Operator& state, const Sites& a, const Sites& c, double q);
double mi_upper_bound_norm(const Operator& state, const Sites& a, const Sites& c);
// || rho_AC - rho_A (x) rho_C ||_1
double trace_distance_product(const Operator& state, const Sites& a, const Sites& c);

double mutual_information(const GibbsEnsemble& ensemble, const Sites& a, const Sites& c);
double bs_mutual_information(const GibbsEnsemble& ensemble, const Sites& a, const Sites& c);
double geometric_renyi_mi(const GibbsEnsemble& ensemble, const Sites& a, const Sites& c, double q);
double mi_upper_bound_norm(const GibbsEnsemble& ensemble, const Sites& a, const Sites& c);
double trace_distance_product(const GibbsEnsemble& ensemble, const Sites& a, const Sites& c);

// All of the above from one pair of marginals.
struct MutualInformationReport {
    double trace_distance = 0.0;
    double mi = 0.0;
    double bs_mi = 0.0;
    std::map<double, double> geometric_renyi_mi;
    double norm_bound = 0.0;
};
MutualInformationReport mutual_information_report(const Operator& state, const Sites& a, const Sites& c,
                                                  const std::vector<double>& qs = {2.0});

// S(AB) + S(BC) - S(B) - S(ABC); B may be empty.
double conditional_mutual_information(const Operator& state, const Sites& a, const Sites& b, const Sites& c);
double conditional_mutual_information(const GibbsEnsemble& ensemble, const Sites& a, const Sites& b,
                                      const Sites& c);

}  // namespace gibbs
