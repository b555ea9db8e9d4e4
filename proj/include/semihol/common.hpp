#ifndef SEMIHOL_COMMON_HPP
#define SEMIHOL_COMMON_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace semihol {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorCode {
  NonSimplePath,
  WrongColumnParity,
  MissingMarks,
  InvalidMarks,
  ViolatedNeighborAssumption,
  OffLattice,
  NotDobrushin,
  BoundaryCut,
  InvalidConfig,
  NotInterior,
  TieBreak,
  ForeignPass,
  ZeroWeightSum,
  TooFewSamples,
  SigmaOutOfRange,
  NTooLarge,
  SiteOutOfRange,
  GridMismatch,
  InconsistentInitialData,
  NotSHolomorphic,
  MissingNeighbor,
  StepTooSmall,
  ZeroDenominator,
  BoundaryViolation,
  NonUnitZeta,
  SchemaError,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Travel directions, identified with the complex units 1, i, -1, -i.
enum class Dir : int { right = 0, up = 1, left = 2, down = 3 };

inline Complex dir_unit(Dir d) {
  switch (d) {
    case Dir::right: return {1, 0};
    case Dir::up: return {0, 1};
    case Dir::left: return {-1, 0};
    default: return {0, -1};
  }
}

inline Dir opposite(Dir d) { return Dir((int(d) + 2) % 4); }
inline bool is_vertical(Dir d) { return d == Dir::up || d == Dir::down; }

// Signed quarter turn taking d1 to d2; requires them perpendicular or equal/opposite.
// Returns +1 for a counter-clockwise quarter, -1 for clockwise, +2 for reversal, 0 if equal.
inline int quarter_turn(Dir d1, Dir d2) {
  int q = (int(d2) - int(d1)) % 4;
  if (q < 0) q += 4;
  if (q == 3) return -1;
  return q;
}

// e^{i m pi/4} evaluated from an exact table of the eight unit phases.
inline Complex eighth_phase(long m) {
  static const double s = std::sqrt(0.5);
  long r = m % 8;
  if (r < 0) r += 8;
  switch (r) {
    case 0: return {1, 0};
    case 1: return {s, s};
    case 2: return {0, 1};
    case 3: return {-s, s};
    case 4: return {-1, 0};
    case 5: return {-s, -s};
    case 6: return {0, -1};
    default: return {s, -s};
  }
}

// exp(i sigma * q * pi/2) for a winding of q quarter turns.
inline Complex sigma_phase(double sigma, long quarters) {
  if (sigma == 0.5) return eighth_phase(quarters);
  return std::polar(1.0, sigma * double(quarters) * kPi / 2.0);
}

}  // namespace semihol

#endif
