#pragma once

#include "ulab/function.hpp"
#include "ulab/group.hpp"
#include "ulab/numeric.hpp"

#include <complex>
#include <string>
#include <vector>

namespace ulab {

/// Norm of f with cube directions drawn uniformly from the subgroup `shifts`
/// and base points uniform on the whole group.
struct NormRequest {
  FunctionTable f;
  Subgroup shifts;
  int k = 2;
};

enum class Engine { Naive, Fast, Fourier };
std::string engine_name(Engine e);
Engine parse_engine(const std::string& name);

// Raw cube averages, i.e. the 2^k-th power of the norm (the mean of f when
// k == 0). These are the quantities the refinement gap is measured in.

/// A = E_x E_{g in K^k} prod_{w in {0,1}^k} f(x + g.w), by direct enumeration.
template <class T>
T gowers_power_naive(const BasicTable<T>& f, const Subgroup& shifts, int k);

/// Same quantity by the derivative recursion
///   A_{k+1}(f) = E_{h in K} A_k(f * T_h f),   A_1(f) = |coset_average(f, K)|_2^2.
template <class T>
T gowers_power(const BasicTable<T>& f, const Subgroup& shifts, int k);

/// E_{h in top} A_{k1-1}(f * T_h f) with inner directions from `shifts`.
template <class T>
T relative_gowers_power(const BasicTable<T>& f, const Subgroup& shifts, const Subgroup& top, int k1);

extern template double gowers_power_naive(const BasicTable<double>&, const Subgroup&, int);
extern template Rational gowers_power_naive(const BasicTable<Rational>&, const Subgroup&, int);
extern template double gowers_power(const BasicTable<double>&, const Subgroup&, int);
extern template Rational gowers_power(const BasicTable<Rational>&, const Subgroup&, int);
extern template double relative_gowers_power(const BasicTable<double>&, const Subgroup&, const Subgroup&, int);
extern template Rational relative_gowers_power(const BasicTable<Rational>&, const Subgroup&, const Subgroup&, int);

/// Converts a cube average to a norm: k == 0 returns the average itself;
/// otherwise averages in (-tol, 0) clamp to 0, anything lower throws
/// ConsistencyError, and the 2^k-th root is taken.
double power_to_norm(double average, int k, double scale = 1.0);

double gowers_norm_naive(const NormRequest& r);
double gowers_norm(const NormRequest& r);
double relative_gowers_norm(const FunctionTable& f, const Subgroup& shifts, const Subgroup& top, int k1);

/// (sum over characters of |f^(chi)|^4)^(1/4), f^(chi) = E_x f(x) conj(chi(x)).
/// Equals the U^2 norm with full-group shifts.
double u2_fourier(const FunctionTable& f);
/// All Fourier coefficients in canonical character order (characters are
/// indexed like group elements).
std::vector<std::complex<double>> fourier_coefficients(const FunctionTable& f);

/// Estimated elementary operations; compared against limits().op_budget.
double naive_cost(std::size_t order, std::size_t shifts, int k);
double fast_cost(std::size_t order, std::size_t shifts, int k);

}  // namespace ulab
