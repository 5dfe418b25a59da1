#include "plasmon/linalg.hpp"

#include <array>
#include <cmath>

#include "plasmon/errors.hpp"

namespace plasmon {

namespace {

using Mat = Eigen::MatrixXcd;

// Max 1-norms for which the [m/m] approximant is accurate to unit roundoff.
constexpr std::array<double, 5> kTheta{1.495585217958292e-2, 2.539398330063230e-1,
                                       9.504178996162932e-1, 2.097847961257068e0,
                                       5.371920351148152e0};
constexpr std::array<int, 5> kDegree{3, 5, 7, 9, 13};

void pade_low(const Mat& a, int degree, Mat& u, Mat& v) {
  static constexpr double c3[] = {120., 60., 12., 1.};
  static constexpr double c5[] = {30240., 15120., 3360., 420., 30., 1.};
  static constexpr double c7[] = {17297280., 8648640., 1995840., 277200.,
                                  25200.,    1512.,    56.,      1.};
  static constexpr double c9[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                                  2162160.,     110880.,     3960.,       90.,       1.};
  const double* c = degree == 3 ? c3 : degree == 5 ? c5 : degree == 7 ? c7 : c9;

  const auto n = a.rows();
  const Mat ident = Mat::Identity(n, n);
  const Mat a2 = a * a;
  Mat power = ident;
  Mat odd = c[1] * ident;
  Mat even = c[0] * ident;
  for (int k = 2; k <= degree; k += 2) {
    power = power * a2;
    even += c[k] * power;
    odd += c[k + 1] * power;
  }
  u = a * odd;
  v = even;
}

void pade13(const Mat& a, Mat& u, Mat& v) {
  static constexpr double c[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                                 1187353796428800.,  129060195264000.,  10559470521600.,
                                 670442572800.,      33522128640.,      1323241920.,
                                 40840800.,          960960.,           16380.,
                                 182.,               1.};
  const auto n = a.rows();
  const Mat ident = Mat::Identity(n, n);
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  Mat tmp = c[13] * a6 + c[11] * a4 + c[9] * a2;
  u = a * (a6 * tmp + c[7] * a6 + c[5] * a4 + c[3] * a2 + c[1] * ident);
  tmp = c[12] * a6 + c[10] * a4 + c[8] * a2;
  v = a6 * tmp + c[6] * a6 + c[4] * a4 + c[2] * a2 + c[0] * ident;
}

}  // namespace

Mat expm(const Mat& a) {
  if (a.rows() != a.cols()) throw DomainError("expm needs a square matrix");
  if (!a.allFinite()) throw DomainError("expm input must be finite");
  if (a.rows() == 0) return a;

  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  Mat u, v;
  int squarings = 0;
  bool done = false;
  for (std::size_t i = 0; i + 1 < kDegree.size(); ++i) {
    if (norm <= kTheta[i]) {
      pade_low(a, kDegree[i], u, v);
      done = true;
      break;
    }
  }
  if (!done) {
    if (norm > kTheta.back()) {
      squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta.back())));
    }
    pade13(a / std::ldexp(1.0, squarings), u, v);
  }

  Mat result = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

}  // namespace plasmon
