// Copyright 2026 The zxopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Exact phases, stored as reduced rational multiples of π in `[0, 2)`.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// A phase `(numerator / denominator) · π`, always reduced modulo 2π.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Phase {
    num: i64,
    den: i64,
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den: 1 };
    pub const PI: Phase = Phase { num: 1, den: 1 };
    pub const HALF_PI: Phase = Phase { num: 1, den: 2 };
    pub const MINUS_HALF_PI: Phase = Phase { num: 3, den: 2 };
    pub const QUARTER_PI: Phase = Phase { num: 1, den: 4 };

    /// Build `num/den · π`. Panics on a zero denominator.
    pub fn new(num: i64, den: i64) -> Phase {
        assert!(den != 0, "phase denominator must be nonzero");
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den);
        num /= g;
        den /= g;
        num = num.rem_euclid(2 * den);
        if num == 0 {
            den = 1;
        }
        Phase { num, den }
    }

    pub fn numerator(self) -> i64 {
        self.num
    }

    pub fn denominator(self) -> i64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_pi(self) -> bool {
        self.num == 1 && self.den == 1
    }

    /// 0 or π.
    pub fn is_pauli(self) -> bool {
        self.den == 1
    }

    /// π/2 or 3π/2.
    pub fn is_proper_clifford(self) -> bool {
        self.den == 2
    }

    /// Integer multiple of π/2.
    pub fn is_clifford(self) -> bool {
        self.den <= 2
    }

    /// Odd multiple of π/4.
    pub fn is_t(self) -> bool {
        self.den == 4
    }

    pub fn to_radians(self) -> f64 {
        self.num as f64 / self.den as f64 * std::f64::consts::PI
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ZERO
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        let l = self.den.lcm(&rhs.den);
        Phase::new(self.num * (l / self.den) + rhs.num * (l / rhs.den), l)
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, rhs: Phase) {
        *self = *self + rhs;
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::new(-self.num, self.den)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        self + (-rhs)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}π/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed phase `{0}`: expected `num/den` or an integer")]
pub struct PhaseParseError(pub String);

impl FromStr for Phase {
    type Err = PhaseParseError;

    /// Accepts `num/den` or a bare integer, both meaning multiples of π.
    fn from_str(s: &str) -> Result<Phase, PhaseParseError> {
        let err = || PhaseParseError(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: i64 = n.parse().map_err(|_| err())?;
        let den: i64 = d.parse().map_err(|_| err())?;
        if den <= 0 {
            return Err(err());
        }
        Ok(Phase::new(num, den))
    }
}

impl From<Phase> for String {
    fn from(p: Phase) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Phase {
    type Error = PhaseParseError;
    fn try_from(s: String) -> Result<Phase, PhaseParseError> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_wraps() {
        assert_eq!(Phase::new(2, 4), Phase::HALF_PI);
        assert_eq!(Phase::new(-1, 2), Phase::MINUS_HALF_PI);
        assert_eq!(Phase::new(5, 2), Phase::HALF_PI);
        assert_eq!(Phase::new(4, 2), Phase::ZERO);
        assert_eq!(Phase::new(3, -4), Phase::new(5, 4));
        assert_eq!(Phase::new(0, 7).denominator(), 1);
    }

    #[test]
    fn eight_quarter_turns_is_zero() {
        let mut p = Phase::ZERO;
        for _ in 0..8 {
            p += Phase::QUARTER_PI;
        }
        assert!(p.is_zero());
    }

    #[test]
    fn classification() {
        assert!(Phase::PI.is_pauli() && Phase::ZERO.is_pauli());
        assert!(Phase::MINUS_HALF_PI.is_proper_clifford());
        assert!(Phase::new(3, 4).is_t());
        assert!(!Phase::new(3, 4).is_clifford());
        assert!((Phase::HALF_PI + Phase::HALF_PI).is_pi());
        assert_eq!(-Phase::HALF_PI, Phase::MINUS_HALF_PI);
    }

    #[test]
    fn parse_round_trip() {
        for p in [Phase::ZERO, Phase::PI, Phase::new(7, 4), Phase::new(1, 3)] {
            assert_eq!(p.to_string().parse::<Phase>().unwrap(), p);
        }
        assert_eq!("3".parse::<Phase>().unwrap(), Phase::PI);
        assert!("1/0".parse::<Phase>().is_err());
        assert!("x/2".parse::<Phase>().is_err());
    }

    proptest::proptest! {
        #[test]
        fn invariants_hold(n in -1000i64..1000, d in 1i64..64, m in -1000i64..1000, e in 1i64..64) {
            let a = Phase::new(n, d);
            let b = Phase::new(m, e);
            for p in [a, b, a + b, a - b, -a] {
                proptest::prop_assert!(p.denominator() >= 1);
                proptest::prop_assert_eq!(p.numerator().gcd(&p.denominator()), 1);
                proptest::prop_assert!(p.numerator() >= 0 && p.numerator() < 2 * p.denominator());
            }
            proptest::prop_assert_eq!(a + b - b, a);
            proptest::prop_assert!((a + (-a)).is_zero());
        }
    }
}
