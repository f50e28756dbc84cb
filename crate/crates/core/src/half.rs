use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::scalar::{rat, Rational};

/// An element of `(1/2)Z`, stored as twice its value.
///
/// Mode depths, mode indices and lattice momenta all live here.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Half(i64);

impl Half {
    pub const ZERO: Half = Half(0);
    pub const HALF: Half = Half(1);
    pub const ONE: Half = Half(2);

    pub const fn int(n: i64) -> Half {
        Half(2 * n)
    }

    /// The value `twice / 2`.
    pub const fn from_twice(twice: i64) -> Half {
        Half(twice)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Integer value, if integral.
    pub fn as_int(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn to_rational(self) -> Rational {
        rat(self.0, 2)
    }

    pub fn from_rational(r: &Rational) -> Option<Half> {
        let twice = r * rat(2, 1);
        if twice.is_integer() {
            use num_traits::ToPrimitive;
            twice.to_integer().to_i64().map(Half)
        } else {
            None
        }
    }

    pub fn floor(self) -> i64 {
        self.0.div_euclid(2)
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Add for Half {
    type Output = Half;
    fn add(self, o: Half) -> Half {
        Half(self.0 + o.0)
    }
}

impl Sub for Half {
    type Output = Half;
    fn sub(self, o: Half) -> Half {
        Half(self.0 - o.0)
    }
}

impl AddAssign for Half {
    fn add_assign(&mut self, o: Half) {
        self.0 += o.0;
    }
}

impl SubAssign for Half {
    fn sub_assign(&mut self, o: Half) {
        self.0 -= o.0;
    }
}

impl Neg for Half {
    type Output = Half;
    fn neg(self) -> Half {
        Half(-self.0)
    }
}

impl Mul<i64> for Half {
    type Output = Half;
    fn mul(self, k: i64) -> Half {
        Half(self.0 * k)
    }
}

impl From<i64> for Half {
    fn from(n: i64) -> Half {
        Half::int(n)
    }
}

impl std::iter::Sum for Half {
    fn sum<I: Iterator<Item = Half>>(iter: I) -> Half {
        iter.fold(Half::ZERO, |a, b| a + b)
    }
}
