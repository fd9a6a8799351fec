#pragma once

#include "gibbs/hamiltonian.hpp"
#include "gibbs/operator.hpp"

#include <string>
#include <vector>

namespace gibbs {

// e^{isH} Q e^{-isH}. Q must be supported inside H's support. Prints a
// warning to std::clog when |s| > 1.
Operator complex_time_evolution(const Operator& h, const Operator& q, cplx s);

// E_{X,Y}(s) = e^{-s H_XY} e^{s H_X + s H_Y} for adjacent blocks X, Y
// (X to the left of Y), with its inverse in closed form.
struct Expansional {
    Interval x_block;
    Interval y_block;
    cplx s{1.0, 0.0};
    Operator value;
    Operator inverse;  // e^{-s(H_X + H_Y)} e^{s H_XY}
};

Expansional expansional(const Interaction& interaction, const Interval& x_block, const Interval& y_block,
                        cplx s = 1.0);

// Theta_{X,Y} = E_{X,Y}(-1/2) and Xi_{X,Y} = Theta_{X,Y}^dagger.
Operator theta(const Interaction& interaction, const Interval& x_block, const Interval& y_block);
Operator xi(const Interaction& interaction, const Interval& x_block, const Interval& y_block);

struct ExpansionalRow {
    int n = 0;
    cplx s;
    double norm = 0.0;          // ||E_n(s)||
    double inverse_norm = 0.0;  // ||E_n(s)^{-1}||
    double difference = 0.0;    // ||E_n(s) - E_{n+1}(s)||
};

struct ExpansionalBoundReport {
    std::vector<ExpansionalRow> rows;  // grouped by s, n ascending
    double empirical_bound = 0.0;      // largest norm or inverse norm seen
    std::string note;
};

// E_n(s) lives on [1-n, n] with X = [1-n, 0] and Y = [1, n].
ExpansionalBoundReport expansional_bound_report(const Interaction& interaction, int max_n,
                                                const std::vector<cplx>& s_grid);

const std::vector<cplx>& default_s_grid();

// Telescoping series E_{X,Y} = sum_n Etilde^(n), with X_n the n sites of X
// next to the cut and Y_n likewise.
struct TailDecomposition {
    std::vector<Operator> terms;  // embedded on X u Y
    std::vector<double> term_norms;
    std::vector<double> partial_sum_errors;  // || sum_{m<=n} Etilde^(m) - E_{X,Y} ||
};

TailDecomposition tail_decomposition(const Interaction& interaction, const Interval& x_block,
                                     const Interval& y_block, cplx s = 1.0);

// ||Q - E_I(Q)||, which lies between ||Q||_I and 2 ||Q||_I where ||Q||_I is
// the distance from Q to the operators supported in I.
double local_distance_upper(const Operator& q, const Interval& region);

}  // namespace gibbs
