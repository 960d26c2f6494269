#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "koopman/exppoly.hpp"
#include "koopman/spectrum.hpp"

namespace koopman {

// Linear differential operator  sum_alpha c_alpha(u) d^alpha  with polynomial
// coefficients, indexed by the derivative multi-index alpha (one order per
// chart coordinate). Composition uses the Leibniz rule, so commutators of
// position and momentum close exactly; coefficients on integer and dyadic
// data stay exact.
class QuantumOperator {
  public:
    using TermMap = std::map<MultiIndex, Polynomial, GradedLexLess>;

    explicit QuantumOperator(Chart chart, double hbar = 1.0);

    // Multiplication by a polynomial (zero derivative order).
    static QuantumOperator multiplication(const Polynomial& p, double hbar = 1.0);
    // c * d/d(name).
    static QuantumOperator derivative(const Chart& chart, std::string_view name,
                                      Cplx c = 1.0, double hbar = 1.0);
    // Momentum conjugate to the named coordinate: -i hbar d/d(name).
    static QuantumOperator momentum(const Chart& chart, std::string_view name,
                                    double hbar);

    const Chart& chart() const { return chart_; }
    double hbar() const { return hbar_; }
    const TermMap& terms() const { return terms_; }
    int max_order() const;
    bool is_zero() const { return terms_.empty(); }

    void add_term(MultiIndex deriv, Polynomial coeff);

    Polynomial apply(const Polynomial& f) const;
    ExpPoly apply(const ExpPoly& f) const;

    // Operator product (this after o), expanded by Leibniz:
    // c d^a (e d^b f) = sum_{v <= a} C(a, v) c (d^v e) d^{a - v + b} f.
    QuantumOperator compose(const QuantumOperator& o) const;

    QuantumOperator operator+(const QuantumOperator& o) const;
    QuantumOperator operator-(const QuantumOperator& o) const;
    QuantumOperator operator*(Cplx s) const;
    QuantumOperator operator*(const QuantumOperator& o) const { return compose(o); }

    bool operator==(const QuantumOperator& o) const;

    std::string to_text() const;  // e.g. "(x^1)*D[x]^2 + 1"

  private:
    Chart chart_;
    double hbar_;
    TermMap terms_;
};

// a b - b a.
QuantumOperator commutator(const QuantumOperator& a, const QuantumOperator& b);

// The scalar c with op = c * identity, established by applying op to every
// monomial of degree <= max_degree and to 1; nullopt if any image differs
// from c * monomial by more than tol in any coefficient.
std::optional<Cplx> verified_scalar(const QuantumOperator& op, int max_degree,
                                    double tol = 0.0);

// ---- model operators -------------------------------------------------------

// Weyl-symmetrized dilation generator -c/2 (x p + p x) in both Schrodinger
// representations. Position: acts on polynomials in x with p = -i hbar d/dx,
// composing to  i hbar c (x d/dx + 1/2). Momentum: acts on polynomials in p
// with x = +i hbar d/dp, composing to  -i hbar c (p d/dp + 1/2).
QuantumOperator dilation_position(double c, double hbar);
QuantumOperator dilation_momentum(double c, double hbar);

// Bargmann picture of the harmonic oscillator on holomorphic polynomials:
// a = d/dz, a* = z, H = hbar omega (z d/dz + 1/2).
QuantumOperator bargmann_lowering(double hbar);
QuantumOperator bargmann_raising(double hbar);
QuantumOperator bargmann_oscillator(double omega, double hbar);

// Planar (two-coordinate) ladder quadruple on the chart ("x", "y"):
//   a1 = (x + d/dy)/sqrt2   a1* = (x - d/dy)/sqrt2
//   a2 = (y + d/dx)/sqrt2   a2* = (y - d/dx)/sqrt2
// with [a1, a2*] = [a2, a1*] = 1 and all other commutators zero.
struct PlanarLadders {
    QuantumOperator a1, a1_raise, a2, a2_raise;
};
PlanarLadders planar_ladders(double hbar);

// Spiral-sink Hamiltonian on the planar chart, two equal routes:
// from the ladders  H = hbar (alpha a2* a1 + conj(alpha) a1* a2 + omega),
// directly          H = hbar omega (x y - d^2/dxdy) - i hbar gamma (y d/dy - x d/dx),
// with alpha = omega - i gamma.
QuantumOperator planar_hamiltonian(double omega, double gamma, double hbar);
QuantumOperator planar_hamiltonian_direct(double omega, double gamma, double hbar);

// Holomorphic picture of the same operator on the chart ("z1", "z2"):
// H = hbar (alpha z1 d/dz1 + conj(alpha) z2 d/dz2 + omega).
QuantumOperator holomorphic_hamiltonian(double omega, double gamma, double hbar);

// ---- spectra and eigenfunction checks --------------------------------------

// Point spectrum of the dilation generator read off monomials x^n (position
// representation, values +i hbar c (n + 1/2)) or p^n (momentum
// representation, values -i hbar c (n + 1/2)) for n <= max_degree. The
// method strings are "quantum-position" and "quantum-momentum".
SpectrumReport dilation_spectrum(bool position_rep, int max_degree, double c,
                                 double hbar);

// Bargmann oscillator values hbar omega (n + 1/2) on z^n, n <= max_degree;
// method "quantum-bargmann".
SpectrumReport bargmann_spectrum(int max_degree, double omega, double hbar);

// Spiral-sink values mu_{nk} = hbar omega (n + k + 1) - i hbar gamma (n - k)
// for n, k <= max_degree, verified against the planar Hamiltonian acting on
// ladder-raised cores (see planar_eigencheck); method "quantum-ccr".
SpectrumReport planar_spectrum(int max_degree, double omega, double gamma,
                               double hbar);

struct EigencheckResult {
    ExpPoly eigenfunction;
    Cplx eigenvalue;
    ExpPoly residual;  // H phi - mu phi; exactly zero on dyadic data
};

// phi_{nk} = (y - d/dx)^n (x - d/dy)^k e^{-x y} with H phi = mu_{nk} phi
// (the a2* ladder raises the -i gamma direction: [a1, a2*] = 1 twists the
// pairing). The raising operators enter without the 1/sqrt2 normalization (a
// positive multiple of an eigenvector is the same eigenvector), keeping
// every coefficient an integer multiple of the inputs so the residual
// cancels bitwise.
EigencheckResult planar_eigencheck(int n, int k, double omega, double gamma,
                                   double hbar);

// Same eigenvalues from the holomorphic picture on z1^n z2^k.
EigencheckResult holomorphic_eigencheck(int n, int k, double omega, double gamma,
                                        double hbar);

// <f, g> = integral of conj(f) g e^{-z zbar} over the plane, for holomorphic
// polynomials f, g in one variable z. The monomials z^n / sqrt(pi n!) are
// orthonormal.
Cplx bargmann_pairing(const Polynomial& f, const Polynomial& g);

// Plane waves under p = -i hbar d/dx: e^{+i z x / hbar} has eigenvalue +z;
// the opposite sign convention e^{-i z x} carries -hbar z. Returns the
// eigenvalues and the amplitude norms of both residuals.
struct PlaneWaveCheck {
    Cplx eigenvalue_plus;   // on e^{+i z x / hbar}
    Cplx eigenvalue_minus;  // on e^{-i z x}
    double residual_plus;
    double residual_minus;
};
PlaneWaveCheck plane_wave_eigencheck(Cplx z, double hbar);

// ---- classical / quantum correspondence ------------------------------------

struct CorrespondenceRow {
    std::string family;         // "oscillator", "dilation", "spiral-sink"
    std::string classical;      // dressed monomial, e.g. "zbar^2 * exp(-z zbar / 2)"
    std::string quantum;        // e.g. "z^2"
    Cplx classical_eigenvalue;  // of i L_H
    Cplx quantum_eigenvalue;    // of the matching quantum Hamiltonian
};

// Matched eigenfunction ladders up to index max_index:
//   oscillator   zbar^n (dressed)   <-> Bargmann z^n
//                z^n (dressed)      <-> conjugated Bargmann functions
//   dilation     x^n                <-> position monomial x^n
//                p^n                <-> momentum monomial p^n
//   spiral sink  z1^n z2^k          <-> holomorphic z1^n z2^k
// Only the oscillator dressing is flow-invariant, so only those classical
// rows carry the Gaussian factor. Eigenvalues are reported side by side;
// the table pairs ladders by label, it does not equate the two spectra.
// Classical eigenvalues decay or rotate (Re(-i lambda) <= 0); the quantum
// partners sit on the matching half-line of the complex plane.
std::vector<CorrespondenceRow> correspondence_table(int max_index, double omega,
                                                    double gamma, double hbar);

}  // namespace koopman
