//! Truncated Taylor expansions ("jets") with complex coefficients.
//!
//! A [`Jet`] stores a function's local behaviour at a base point t₀ as the
//! Taylor coefficients c_k = ∂^k f(t₀)/k! for k = 0..=order. Storing the
//! *Taylor form* rather than raw derivatives keeps products well scaled
//! (multiplication is a Cauchy convolution, no factorials appear) and avoids
//! overflow at high orders; raw derivatives are recovered on demand as
//! k!·c_k.
//!
//! Coefficients are complex throughout — real functions are simply the
//! special case with vanishing imaginary parts. All arithmetic truncates to
//! the shorter operand, and k-fold differentiation lowers the order by k;
//! nothing is ever silently extrapolated. The hard order cap [`MAX_ORDER`]
//! turns runaway order requests into errors instead of silent truncation.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hardest order any jet may carry. Exceeding it is an error, never a silent
/// truncation.
pub const MAX_ORDER: usize = 24;

/// Truncated Taylor expansion of a smooth function at a real base point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    base_point: f64,
    /// coeffs[k] = ∂^k f(base_point) / k!
    coeffs: Vec<Complex64>,
}

impl Jet {
    /// Builds a jet from explicit Taylor coefficients.
    pub fn new(base_point: f64, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidJet("empty coefficient list".into()));
        }
        if coeffs.len() > MAX_ORDER + 1 {
            return Err(Error::OrderBudget {
                needed: coeffs.len() - 1,
                max: MAX_ORDER,
            });
        }
        if !base_point.is_finite() {
            return Err(Error::InvalidJet(format!(
                "non-finite base point {base_point}"
            )));
        }
        Ok(Jet { base_point, coeffs })
    }

    /// Builds a jet with real Taylor coefficients.
    pub fn from_real(base_point: f64, coeffs: &[f64]) -> Result<Self> {
        Self::new(
            base_point,
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        )
    }

    /// The identity function t ↦ t expanded at `base_point`: value t₀,
    /// first derivative 1, all higher coefficients 0.
    pub fn variable(base_point: f64, order: usize) -> Result<Self> {
        check_order(order)?;
        let mut coeffs = vec![Complex64::ZERO; order + 1];
        coeffs[0] = Complex64::new(base_point, 0.0);
        if order >= 1 {
            coeffs[1] = Complex64::ONE;
        }
        Jet::new(base_point, coeffs)
    }

    /// A constant function as a jet of the given order.
    pub fn constant(value: Complex64, base_point: f64, order: usize) -> Result<Self> {
        check_order(order)?;
        let mut coeffs = vec![Complex64::ZERO; order + 1];
        coeffs[0] = value;
        Jet::new(base_point, coeffs)
    }

    /// The zero function as a jet of the given order.
    pub fn zero(base_point: f64, order: usize) -> Result<Self> {
        Self::constant(Complex64::ZERO, base_point, order)
    }

    pub fn base_point(&self) -> f64 {
        self.base_point
    }

    /// Highest represented derivative order.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Taylor coefficient c_k.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Function value at the base point (the order-0 coefficient).
    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Raw k-th derivative at the base point, k!·c_k.
    pub fn derivative_value(&self, k: usize) -> Result<Complex64> {
        if k > self.order() {
            return Err(Error::DerivativeExceedsOrder {
                k,
                order: self.order(),
            });
        }
        Ok(self.coeffs[k] * factorial(k))
    }

    /// True when every coefficient's imaginary part is within `tol` of zero.
    pub fn is_real(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.im.abs() <= tol)
    }

    /// Elementwise real part. For an analytic representative g this is the jet
    /// of Re g, since ∂^k Re g = Re ∂^k g along a real axis.
    pub fn real_part(&self) -> Jet {
        Jet {
            base_point: self.base_point,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Complex64::new(c.re, 0.0))
                .collect(),
        }
    }

    fn check_same_base(&self, other: &Jet) -> Result<()> {
        // Bitwise comparison: jets only combine when expanded at the very
        // same point, and all in-crate callers construct them from one scalar.
        if self.base_point != other.base_point {
            return Err(Error::MismatchedBasePoints {
                left: self.base_point,
                right: other.base_point,
            });
        }
        Ok(())
    }

    /// Sum, truncated to the shorter operand.
    pub fn add(&self, other: &Jet) -> Result<Jet> {
        self.check_same_base(other)?;
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeffs[k] + other.coeffs[k]).collect();
        Ok(Jet {
            base_point: self.base_point,
            coeffs,
        })
    }

    /// Difference, truncated to the shorter operand.
    pub fn sub(&self, other: &Jet) -> Result<Jet> {
        self.check_same_base(other)?;
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeffs[k] - other.coeffs[k]).collect();
        Ok(Jet {
            base_point: self.base_point,
            coeffs,
        })
    }

    pub fn neg(&self) -> Jet {
        Jet {
            base_point: self.base_point,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Multiplication by a scalar.
    pub fn scale(&self, s: Complex64) -> Jet {
        Jet {
            base_point: self.base_point,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Cauchy product, truncated to the shorter operand.
    ///
    /// Each convolution sum pairs the terms a_j·b_{k−j} and a_{k−j}·b_j before
    /// accumulating, which makes the product bitwise commutative in floating
    /// point. Structural cancellations such as f·∂f − ∂f·f then vanish
    /// exactly, coefficient by coefficient, rather than to rounding noise.
    pub fn mul(&self, other: &Jet) -> Result<Jet> {
        self.check_same_base(other)?;
        let n = self.coeffs.len().min(other.coeffs.len());
        let a = &self.coeffs;
        let b = &other.coeffs;
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let mut s = Complex64::ZERO;
            let mut j = 0usize;
            let mut l = k;
            while j < l {
                s += a[j] * b[l] + a[l] * b[j];
                j += 1;
                l -= 1;
            }
            if j == l {
                s += a[j] * b[j];
            }
            coeffs.push(s);
        }
        Ok(Jet {
            base_point: self.base_point,
            coeffs,
        })
    }

    /// Quotient self/other, truncated to the shorter operand. The divisor's
    /// constant term must not vanish.
    pub fn div(&self, other: &Jet) -> Result<Jet> {
        self.check_same_base(other)?;
        let b0 = other.coeffs[0];
        if b0 == Complex64::ZERO {
            return Err(Error::DivisionByZero);
        }
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut q: Vec<Complex64> = Vec::with_capacity(n);
        for k in 0..n {
            let mut s = self.coeffs[k];
            for (j, qj) in q.iter().enumerate() {
                s -= *qj * other.coeffs[k - j];
            }
            q.push(s / b0);
        }
        Ok(Jet {
            base_point: self.base_point,
            coeffs: q,
        })
    }

    /// Integer power aⁿ at the same truncation order.
    ///
    /// Non-negative powers use binary exponentiation over [`Jet::mul`] (valid
    /// for any jet, including vanishing constant terms). Negative powers use
    /// the first-order recurrence derived from a·(aⁿ)′ = n·a′·aⁿ, which
    /// requires a non-vanishing constant term.
    pub fn powi(&self, n: i32) -> Result<Jet> {
        if n >= 0 {
            let mut result = Jet::constant(Complex64::ONE, self.base_point, self.order())?;
            let mut base = self.clone();
            let mut e = n as u32;
            while e > 0 {
                if e & 1 == 1 {
                    result = result.mul(&base)?;
                }
                e >>= 1;
                if e > 0 {
                    base = base.mul(&base)?;
                }
            }
            Ok(result)
        } else {
            let a0 = self.coeffs[0];
            if a0 == Complex64::ZERO {
                return Err(Error::NegativePowerOfZero);
            }
            let nn = f64::from(n);
            let mut p: Vec<Complex64> = Vec::with_capacity(self.coeffs.len());
            p.push(a0.powi(n));
            for k in 1..self.coeffs.len() {
                let mut s = Complex64::ZERO;
                for j in 1..=k {
                    let w = (j as f64) * nn - ((k - j) as f64);
                    s += self.coeffs[j] * p[k - j] * w;
                }
                p.push(s / (a0 * k as f64));
            }
            Ok(Jet {
                base_point: self.base_point,
                coeffs: p,
            })
        }
    }

    /// k-fold derivative: coefficients shift down and pick up the factor
    /// (j+k)!/j!. The order drops by k.
    pub fn derivative(&self, k: usize) -> Result<Jet> {
        if k == 0 {
            return Ok(self.clone());
        }
        if k > self.order() {
            return Err(Error::DerivativeExceedsOrder {
                k,
                order: self.order(),
            });
        }
        let new_len = self.coeffs.len() - k;
        let mut coeffs = Vec::with_capacity(new_len);
        for j in 0..new_len {
            // (j+k)!/j! = (j+1)(j+2)…(j+k)
            let mut factor = 1.0f64;
            for m in 1..=k {
                factor *= (j + m) as f64;
            }
            coeffs.push(self.coeffs[j + k] * factor);
        }
        Ok(Jet {
            base_point: self.base_point,
            coeffs,
        })
    }

    /// Antiderivative with the convention that it vanishes at the base point:
    /// the constant term of the result is 0. The order rises by one.
    pub fn antiderivative(&self) -> Result<Jet> {
        if self.order() + 1 > MAX_ORDER {
            return Err(Error::OrderBudget {
                needed: self.order() + 1,
                max: MAX_ORDER,
            });
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::ZERO);
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / (j as f64 + 1.0));
        }
        Ok(Jet {
            base_point: self.base_point,
            coeffs,
        })
    }

    /// exp(a) via the standard recurrence e_k = (1/k)·Σ_{j=1..k} j·a_j·e_{k−j}.
    pub fn exp(&self) -> Jet {
        let n = self.coeffs.len();
        let mut e: Vec<Complex64> = Vec::with_capacity(n);
        e.push(self.coeffs[0].exp());
        for k in 1..n {
            let mut s = Complex64::ZERO;
            for j in 1..=k {
                s += self.coeffs[j] * e[k - j] * (j as f64);
            }
            e.push(s / k as f64);
        }
        Jet {
            base_point: self.base_point,
            coeffs: e,
        }
    }

    /// sin(a) via the joint sine/cosine recurrence.
    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    /// cos(a) via the joint sine/cosine recurrence.
    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    /// Simultaneous sin(a) and cos(a); the pair shares one recurrence:
    /// s_k = (1/k)·Σ j·a_j·c_{k−j},  c_k = −(1/k)·Σ j·a_j·s_{k−j}.
    pub fn sin_cos(&self) -> (Jet, Jet) {
        let n = self.coeffs.len();
        let mut s: Vec<Complex64> = Vec::with_capacity(n);
        let mut c: Vec<Complex64> = Vec::with_capacity(n);
        s.push(self.coeffs[0].sin());
        c.push(self.coeffs[0].cos());
        for k in 1..n {
            let mut ds = Complex64::ZERO;
            let mut dc = Complex64::ZERO;
            for j in 1..=k {
                let w = self.coeffs[j] * (j as f64);
                ds += w * c[k - j];
                dc += w * s[k - j];
            }
            s.push(ds / k as f64);
            c.push(-dc / k as f64);
        }
        (
            Jet {
                base_point: self.base_point,
                coeffs: s,
            },
            Jet {
                base_point: self.base_point,
                coeffs: c,
            },
        )
    }
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::OrderBudget {
            needed: order,
            max: MAX_ORDER,
        });
    }
    Ok(())
}

/// k! as f64 (exact up to 18!, correctly rounded beyond; k ≤ MAX_ORDER keeps
/// this well inside f64 range).
pub(crate) fn factorial(k: usize) -> f64 {
    let mut f = 1.0f64;
    for m in 2..=k {
        f *= m as f64;
    }
    f
}

/// Binomial coefficient C(n, k) as f64.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut b = 1.0f64;
    for m in 0..k {
        b = b * ((n - m) as f64) / ((m + 1) as f64);
    }
    b
}
