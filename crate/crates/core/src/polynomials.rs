//! Algebraic, trigonometric and exponential polynomials.
//!
//! Each family is available in coefficient form ([`AlgebraicPoly`],
//! [`TrigPoly`], [`ExpPoly`]) and in factored form ([`FactoredSpec`]). All of
//! them evaluate value and first derivative together through
//! [`RootFunction`], which is the only thing the iteration needs.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Algebraic,
    Trigonometric,
    Exponential,
}

impl Family {
    /// Number of roots, counted with multiplicity, of a degree-`n` member.
    pub fn root_count(self, degree: usize) -> usize {
        match self {
            Family::Algebraic => degree,
            Family::Trigonometric | Family::Exponential => 2 * degree,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Algebraic => "algebraic",
            Family::Trigonometric => "trigonometric",
            Family::Exponential => "exponential",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("an algebraic polynomial needs degree >= 1 (got {0} coefficients)")]
    DegreeTooLow(usize),
    #[error("leading coefficient is zero")]
    ZeroLeading,
    #[error("cosine/cosh and sine/sinh coefficient lists differ in length ({a} vs {b})")]
    LengthMismatch { a: usize, b: usize },
    #[error("a {0} polynomial needs degree >= 1")]
    EmptyHarmonics(Family),
    #[error("both leading coefficients a_n and b_n vanish")]
    VanishingLeadingPair,
    #[error("roots and multiplicities differ in length ({roots} vs {multiplicities})")]
    RootCountMismatch { roots: usize, multiplicities: usize },
    #[error("factored form needs at least one root")]
    NoRoots,
    #[error("multiplicity of root {0} must be >= 1")]
    ZeroMultiplicity(usize),
    #[error("roots {0} and {1} coincide")]
    DuplicateRoot(usize, usize),
    #[error(
        "total multiplicity {total} is odd; a {family} polynomial has an even number of roots"
    )]
    OddTotalMultiplicity { family: Family, total: u32 },
    #[error("expansion left an imaginary residue of relative size {0:e}")]
    ImaginaryResidue(f64),
}

/// Anything whose value and first derivative can be evaluated at a point.
pub trait RootFunction {
    fn family(&self) -> Family;

    /// Roots counted with multiplicity (`n` algebraic, `2n` otherwise).
    fn root_count(&self) -> usize;

    fn eval_with_derivative(&self, x: &Scalar) -> (Scalar, Scalar);
}

/// Monic algebraic polynomial, coefficients in degree-descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicPoly {
    coeffs: Vec<Scalar>,
}

impl AlgebraicPoly {
    /// Builds the polynomial, dividing through by the leading coefficient.
    pub fn new(coeffs: Vec<Scalar>) -> Result<Self, PolyError> {
        if coeffs.len() < 2 {
            return Err(PolyError::DegreeTooLow(coeffs.len()));
        }
        let lead = coeffs[0].clone();
        if lead.is_zero() {
            return Err(PolyError::ZeroLeading);
        }
        let coeffs = if lead == lead.int_like(1) {
            coeffs
        } else {
            coeffs.iter().map(|c| c / &lead).collect()
        };
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

impl RootFunction for AlgebraicPoly {
    fn family(&self) -> Family {
        Family::Algebraic
    }

    fn root_count(&self) -> usize {
        self.degree()
    }

    fn eval_with_derivative(&self, x: &Scalar) -> (Scalar, Scalar) {
        let mut value = self.coeffs[0].clone();
        let mut derivative = value.int_like(0);
        for c in &self.coeffs[1..] {
            derivative = &(&derivative * x) + &value;
            value = &(&value * x) + c;
        }
        (value, derivative)
    }
}

/// Shared layout of the trigonometric and exponential families:
/// `a0/2 + sum_l (a_l f(lx) + b_l g(lx))`.
#[derive(Debug, Clone, PartialEq)]
struct Harmonics {
    a0: Scalar,
    a: Vec<Scalar>,
    b: Vec<Scalar>,
}

impl Harmonics {
    fn new(family: Family, a0: Scalar, a: Vec<Scalar>, b: Vec<Scalar>) -> Result<Self, PolyError> {
        if a.len() != b.len() {
            return Err(PolyError::LengthMismatch {
                a: a.len(),
                b: b.len(),
            });
        }
        let n = a.len();
        if n == 0 {
            return Err(PolyError::EmptyHarmonics(family));
        }
        if a[n - 1].is_zero() && b[n - 1].is_zero() {
            return Err(PolyError::VanishingLeadingPair);
        }
        Ok(Self { a0, a, b })
    }
}

/// `a0/2 + sum_{l=1..n} (a_l cos(lx) + b_l sin(lx))`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly(Harmonics);

impl TrigPoly {
    pub fn new(a0: Scalar, a: Vec<Scalar>, b: Vec<Scalar>) -> Result<Self, PolyError> {
        Harmonics::new(Family::Trigonometric, a0, a, b).map(Self)
    }

    pub fn a0(&self) -> &Scalar {
        &self.0.a0
    }

    pub fn a(&self) -> &[Scalar] {
        &self.0.a
    }

    pub fn b(&self) -> &[Scalar] {
        &self.0.b
    }

    pub fn degree(&self) -> usize {
        self.0.a.len()
    }
}

impl RootFunction for TrigPoly {
    fn family(&self) -> Family {
        Family::Trigonometric
    }

    fn root_count(&self) -> usize {
        2 * self.degree()
    }

    fn eval_with_derivative(&self, x: &Scalar) -> (Scalar, Scalar) {
        let Harmonics { a0, a, b } = &self.0;
        let mut value = a0.half();
        let mut derivative = value.int_like(0);
        for (l, (al, bl)) in a.iter().zip(b).enumerate() {
            let l = l as i64 + 1;
            let arg = x.mul_int(l);
            let (s, c) = (arg.sin(), arg.cos());
            value = &value + &(&(al * &c) + &(bl * &s));
            derivative = &derivative + &(&(bl * &c) - &(al * &s)).mul_int(l);
        }
        (value, derivative)
    }
}

/// `a0/2 + sum_{l=1..n} (a_l cosh(lx) + b_l sinh(lx))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPoly(Harmonics);

impl ExpPoly {
    pub fn new(a0: Scalar, a: Vec<Scalar>, b: Vec<Scalar>) -> Result<Self, PolyError> {
        Harmonics::new(Family::Exponential, a0, a, b).map(Self)
    }

    pub fn a0(&self) -> &Scalar {
        &self.0.a0
    }

    pub fn a(&self) -> &[Scalar] {
        &self.0.a
    }

    pub fn b(&self) -> &[Scalar] {
        &self.0.b
    }

    pub fn degree(&self) -> usize {
        self.0.a.len()
    }
}

impl RootFunction for ExpPoly {
    fn family(&self) -> Family {
        Family::Exponential
    }

    fn root_count(&self) -> usize {
        2 * self.degree()
    }

    fn eval_with_derivative(&self, x: &Scalar) -> (Scalar, Scalar) {
        let Harmonics { a0, a, b } = &self.0;
        let mut value = a0.half();
        let mut derivative = value.int_like(0);
        for (l, (al, bl)) in a.iter().zip(b).enumerate() {
            let l = l as i64 + 1;
            let arg = x.mul_int(l);
            let (sh, ch) = (arg.sinh(), arg.cosh());
            value = &value + &(&(al * &ch) + &(bl * &sh));
            derivative = &derivative + &(&(al * &sh) + &(bl * &ch)).mul_int(l);
        }
        (value, derivative)
    }
}

/// A coefficient-form polynomial of any family.
#[derive(Debug, Clone, PartialEq)]
pub enum Polynomial {
    Algebraic(AlgebraicPoly),
    Trigonometric(TrigPoly),
    Exponential(ExpPoly),
}

impl RootFunction for Polynomial {
    fn family(&self) -> Family {
        match self {
            Polynomial::Algebraic(_) => Family::Algebraic,
            Polynomial::Trigonometric(_) => Family::Trigonometric,
            Polynomial::Exponential(_) => Family::Exponential,
        }
    }

    fn root_count(&self) -> usize {
        match self {
            Polynomial::Algebraic(p) => p.root_count(),
            Polynomial::Trigonometric(p) => p.root_count(),
            Polynomial::Exponential(p) => p.root_count(),
        }
    }

    fn eval_with_derivative(&self, x: &Scalar) -> (Scalar, Scalar) {
        match self {
            Polynomial::Algebraic(p) => p.eval_with_derivative(x),
            Polynomial::Trigonometric(p) => p.eval_with_derivative(x),
            Polynomial::Exponential(p) => p.eval_with_derivative(x),
        }
    }
}

/// `scale * prod_j f((x - x_j)/s)^alpha_j` with `f(t) = t, s = 1` (algebraic),
/// `f = sin, s = 2` (trigonometric) or `f = sinh, s = 2` (exponential).
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredSpec {
    family: Family,
    roots: Vec<Scalar>,
    multiplicities: Vec<u32>,
    scale: Scalar,
}

impl FactoredSpec {
    pub fn new(
        family: Family,
        roots: Vec<Scalar>,
        multiplicities: Vec<u32>,
        scale: Scalar,
    ) -> Result<Self, PolyError> {
        if roots.len() != multiplicities.len() {
            return Err(PolyError::RootCountMismatch {
                roots: roots.len(),
                multiplicities: multiplicities.len(),
            });
        }
        if roots.is_empty() {
            return Err(PolyError::NoRoots);
        }
        if let Some(i) = multiplicities.iter().position(|&m| m == 0) {
            return Err(PolyError::ZeroMultiplicity(i));
        }
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                if roots[i] == roots[j] {
                    return Err(PolyError::DuplicateRoot(i, j));
                }
            }
        }
        if scale.is_zero() {
            return Err(PolyError::ZeroLeading);
        }
        let total: u32 = multiplicities.iter().sum();
        if family != Family::Algebraic && total % 2 == 1 {
            return Err(PolyError::OddTotalMultiplicity { family, total });
        }
        Ok(Self {
            family,
            roots,
            multiplicities,
            scale,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn roots(&self) -> &[Scalar] {
        &self.roots
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    pub fn scale(&self) -> &Scalar {
        &self.scale
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.multiplicities.iter().sum()
    }

    /// Degree of the coefficient form: `sum(alpha)` for algebraic, half of it
    /// otherwise.
    pub fn degree(&self) -> usize {
        let total = self.total_multiplicity() as usize;
        match self.family {
            Family::Algebraic => total,
            Family::Trigonometric | Family::Exponential => total / 2,
        }
    }
}

/// Value and derivative of one factor `f((x - r)/s)`.
fn factor(family: Family, x: &Scalar, root: &Scalar) -> (Scalar, Scalar) {
    let t = x - root;
    match family {
        Family::Algebraic => {
            let one = t.int_like(1);
            (t, one)
        }
        Family::Trigonometric => {
            let h = t.half();
            (h.sin(), h.cos().half())
        }
        Family::Exponential => {
            let h = t.half();
            (h.sinh(), h.cosh().half())
        }
    }
}

/// Evaluates the factored form, carrying the product rule through every
/// factor so both channels vanish exactly at roots of multiplicity >= 2.
pub fn eval_factored(spec: &FactoredSpec, x: &Scalar) -> (Scalar, Scalar) {
    let mut value = spec.scale.clone();
    let mut derivative = value.int_like(0);
    for (root, &alpha) in spec.roots.iter().zip(&spec.multiplicities) {
        let (f, df) = factor(spec.family, x, root);
        let power = f.powi(alpha as i32);
        let dpower = &f.powi(alpha as i32 - 1) * &df.mul_int(alpha as i64);
        derivative = &(&derivative * &power) + &(&value * &dpower);
        value = &value * &power;
    }
    (value, derivative)
}

impl RootFunction for FactoredSpec {
    fn family(&self) -> Family {
        self.family
    }

    fn root_count(&self) -> usize {
        self.total_multiplicity() as usize
    }

    fn eval_with_derivative(&self, x: &Scalar) -> (Scalar, Scalar) {
        eval_factored(self, x)
    }
}

#[derive(Clone)]
struct Complex {
    re: Scalar,
    im: Scalar,
}

impl Complex {
    fn add(&self, o: &Complex) -> Complex {
        Complex {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn mul(&self, o: &Complex) -> Complex {
        Complex {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }
}

/// Multiplies `poly` (highest power first, powers stepping by two) by
/// `hi * z + lo / z`.
fn convolve_pair<T: Clone>(
    poly: &[T],
    hi: &T,
    lo: &T,
    mul: impl Fn(&T, &T) -> T,
    add: impl Fn(&T, &T) -> T,
) -> Vec<T> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    out.push(mul(hi, &poly[0]));
    for t in 1..poly.len() {
        out.push(add(&mul(hi, &poly[t]), &mul(lo, &poly[t - 1])));
    }
    out.push(mul(lo, &poly[poly.len() - 1]));
    out
}

/// Rewrites a factored spec in coefficient form.
///
/// Trigonometric factors go through `sin(u) = (e^{iu} - e^{-iu}) / 2i` and
/// the Laurent coefficients in `e^{ix/2}` are convolved; exponential factors
/// use the real analogue with `e^{x/2}`. The algebraic result is normalized
/// to be monic, so it matches [`eval_factored`] up to the factor `scale`.
pub fn expand_factored(spec: &FactoredSpec) -> Result<Polynomial, PolyError> {
    let scale = spec.scale.clone();
    let zero = scale.int_like(0);
    let one = scale.int_like(1);
    let factors = spec
        .roots
        .iter()
        .zip(&spec.multiplicities)
        .flat_map(|(r, &alpha)| std::iter::repeat_n(r, alpha as usize));

    match spec.family {
        Family::Algebraic => {
            let mut coeffs = vec![scale.clone()];
            for r in factors {
                let neg_r = -r;
                coeffs = convolve_pair(&coeffs, &one, &neg_r, |a, b| a * b, |a, b| a + b);
            }
            Ok(Polynomial::Algebraic(AlgebraicPoly::new(coeffs)?))
        }
        Family::Trigonometric => {
            // sin((x - r)/2) = (-i/2) e^{-ir/2} z + (i/2) e^{ir/2} / z, z = e^{ix/2}
            let mut laurent = vec![Complex {
                re: scale.clone(),
                im: zero.clone(),
            }];
            for r in factors {
                let h = r.half();
                let (s, c) = (h.sin().half(), h.cos().half());
                let hi = Complex { re: -&s, im: -&c };
                let lo = Complex { re: -&s, im: c };
                laurent = convolve_pair(&laurent, &hi, &lo, Complex::mul, Complex::add);
            }
            let n = spec.degree();
            // laurent[t] holds the coefficient of e^{i(n - t)x}
            let coeff = |l: isize| &laurent[(n as isize - l) as usize];
            let mut residue = coeff(0).im.abs();
            let a0 = coeff(0).re.mul_int(2);
            let mut a = Vec::with_capacity(n);
            let mut b = Vec::with_capacity(n);
            for l in 1..=n as isize {
                let (p, m) = (coeff(l), coeff(-l));
                a.push(&p.re + &m.re);
                b.push(&m.im - &p.im);
                residue = residue.max(&(&p.im + &m.im).abs()).clone();
                residue = residue.max(&(&p.re - &m.re).abs()).clone();
            }
            check_residue(&residue, &a0, &a, &b)?;
            check_leading(&a0, &a, &b)?;
            Ok(Polynomial::Trigonometric(TrigPoly::new(a0, a, b)?))
        }
        Family::Exponential => {
            // sinh((x - r)/2) = (e^{-r/2} w - e^{r/2} / w) / 2, w = e^{x/2}
            let mut laurent = vec![scale.clone()];
            for r in factors {
                let e = r.half().exp();
                let hi = e.recip().half();
                let lo = -e.half();
                laurent = convolve_pair(&laurent, &hi, &lo, |a, b| a * b, |a, b| a + b);
            }
            let n = spec.degree();
            let coeff = |l: isize| &laurent[(n as isize - l) as usize];
            let a0 = coeff(0).mul_int(2);
            let mut a = Vec::with_capacity(n);
            let mut b = Vec::with_capacity(n);
            for l in 1..=n as isize {
                a.push(coeff(l) + coeff(-l));
                b.push(coeff(l) - coeff(-l));
            }
            check_leading(&a0, &a, &b)?;
            Ok(Polynomial::Exponential(ExpPoly::new(a0, a, b)?))
        }
    }
}

fn largest(a0: &Scalar, a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .chain(b)
        .fold(a0.abs(), |acc, c| acc.max(&c.abs()).clone())
}

fn relative_threshold(reference: &Scalar) -> Scalar {
    reference * &reference.pow10_like(5 - reference.decimal_digits() as i32)
}

fn check_residue(
    residue: &Scalar,
    a0: &Scalar,
    a: &[Scalar],
    b: &[Scalar],
) -> Result<(), PolyError> {
    let big = largest(a0, a, b);
    if *residue > relative_threshold(&big) {
        return Err(PolyError::ImaginaryResidue((residue / &big).to_f64()));
    }
    Ok(())
}

fn check_leading(a0: &Scalar, a: &[Scalar], b: &[Scalar]) -> Result<(), PolyError> {
    let big = largest(a0, a, b);
    let floor = relative_threshold(&big);
    let n = a.len();
    if a[n - 1].abs() <= floor && b[n - 1].abs() <= floor {
        return Err(PolyError::VanishingLeadingPair);
    }
    Ok(())
}
