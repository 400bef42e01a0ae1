//! Exact log₂-domain arithmetic for quantities far below floating-point range.
//!
//! The balance calculus compares numbers like 4^{-258} and ξ^{-2L}; those are
//! kept as `log₂(magnitude)` together with an explicit sign, so no quantity
//! ever underflows.

use serde::{Deserialize, Serialize};

/// A strictly positive quantity stored as log₂ of its value.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Log2Mag(pub f64);

impl Log2Mag {
    /// Wrap a linear-domain positive value.
    pub fn from_linear(x: f64) -> Self {
        assert!(x > 0.0, "log-domain magnitude must be positive, got {x}");
        Log2Mag(x.log2())
    }

    /// The stored exponent: `self = 2^exponent`.
    pub fn exponent(self) -> f64 {
        self.0
    }

    /// Back to linear domain; underflows to 0.0 and overflows to ∞ silently.
    pub fn to_linear(self) -> f64 {
        self.0.exp2()
    }

    /// Product: exponents add.
    pub fn mul(self, other: Log2Mag) -> Log2Mag {
        Log2Mag(self.0 + other.0)
    }

    /// Quotient: exponents subtract.
    pub fn div(self, other: Log2Mag) -> Log2Mag {
        Log2Mag(self.0 - other.0)
    }

    /// Integer or real power.
    pub fn powf(self, p: f64) -> Log2Mag {
        Log2Mag(self.0 * p)
    }

    /// Sum of two magnitudes via the stable log-sum trick.
    pub fn add(self, other: Log2Mag) -> Log2Mag {
        let (hi, lo) = if self.0 >= other.0 {
            (self.0, other.0)
        } else {
            (other.0, self.0)
        };
        Log2Mag(hi + (1.0 + (lo - hi).exp2()).log2())
    }

    /// Difference `self - other`, requiring `self > other`.
    pub fn sub(self, other: Log2Mag) -> Log2Mag {
        assert!(
            self.0 > other.0,
            "log-domain subtraction needs a strictly larger minuend"
        );
        Log2Mag(self.0 + (1.0 - (other.0 - self.0).exp2()).log2())
    }
}

/// Sign of a signed log-domain value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// A real number held as a sign plus log₂ magnitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignedLog2 {
    pub sign: Sign,
    /// log₂|value|; meaningless when `sign == Zero`.
    pub mag: f64,
}

impl SignedLog2 {
    pub fn zero() -> Self {
        SignedLog2 {
            sign: Sign::Zero,
            mag: f64::NEG_INFINITY,
        }
    }

    pub fn positive(mag: Log2Mag) -> Self {
        SignedLog2 {
            sign: Sign::Positive,
            mag: mag.exponent(),
        }
    }

    pub fn negative(mag: Log2Mag) -> Self {
        SignedLog2 {
            sign: Sign::Negative,
            mag: mag.exponent(),
        }
    }

    pub fn from_linear(x: f64) -> Self {
        if x == 0.0 {
            Self::zero()
        } else if x > 0.0 {
            Self::positive(Log2Mag::from_linear(x))
        } else {
            Self::negative(Log2Mag::from_linear(-x))
        }
    }

    pub fn to_linear(self) -> f64 {
        match self.sign {
            Sign::Zero => 0.0,
            Sign::Positive => self.mag.exp2(),
            Sign::Negative => -self.mag.exp2(),
        }
    }

    /// Magnitude as a log-domain value; panics on zero.
    pub fn magnitude(self) -> Log2Mag {
        assert!(self.sign != Sign::Zero, "zero has no log-domain magnitude");
        Log2Mag(self.mag)
    }

    /// Exact signed addition in the log domain.
    pub fn add(self, other: SignedLog2) -> SignedLog2 {
        match (self.sign, other.sign) {
            (Sign::Zero, _) => other,
            (_, Sign::Zero) => self,
            (a, b) if a == b => SignedLog2 {
                sign: a,
                mag: self.magnitude().add(other.magnitude()).exponent(),
            },
            _ => {
                // Opposite signs: subtract the smaller magnitude from the larger.
                let (big, small) = if self.mag > other.mag {
                    (self, other)
                } else if other.mag > self.mag {
                    (other, self)
                } else {
                    return SignedLog2::zero();
                };
                SignedLog2 {
                    sign: big.sign,
                    mag: big.magnitude().sub(small.magnitude()).exponent(),
                }
            }
        }
    }
}

/// Floor of the k-th root of n, exact in integer arithmetic.
pub fn integer_root_floor(n: u128, k: u32) -> u128 {
    assert!(k >= 1);
    if n <= 1 {
        return n;
    }
    let mut lo: u128 = 1;
    let mut hi: u128 = 1u128 << (128 / k.max(1)).min(127);
    while hi.checked_pow(k).map(|p| p <= n).unwrap_or(false) {
        hi <<= 1;
    }
    // Invariant: lo^k <= n < hi^k.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match mid.checked_pow(k) {
            Some(p) if p <= n => lo = mid,
            _ => hi = mid,
        }
    }
    lo
}

/// Ceiling of the k-th root of n, exact in integer arithmetic.
pub fn integer_root_ceil(n: u128, k: u32) -> u128 {
    let f = integer_root_floor(n, k);
    if f.checked_pow(k) == Some(n) {
        f
    } else {
        f + 1
    }
}
