//! Exact rational degrees-of-freedom values.

use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// A nonnegative exact rational, serialized as `{"num": p, "den": q}` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDof", into = "RawDof")]
pub struct Dof(Ratio<u64>);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDof {
    num: u64,
    den: u64,
}

impl TryFrom<RawDof> for Dof {
    type Error = String;

    fn try_from(raw: RawDof) -> Result<Self, Self::Error> {
        if raw.den == 0 {
            return Err("denominator must be positive".into());
        }
        Ok(Dof::new(raw.num, raw.den))
    }
}

impl From<Dof> for RawDof {
    fn from(d: Dof) -> Self {
        RawDof {
            num: *d.0.numer(),
            den: *d.0.denom(),
        }
    }
}

impl Dof {
    /// Panics if `den` is zero.
    pub fn new(num: u64, den: u64) -> Self {
        Dof(Ratio::new(num, den))
    }

    pub fn integer(value: u64) -> Self {
        Dof(Ratio::from_integer(value))
    }

    pub fn zero() -> Self {
        Dof(Ratio::zero())
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    /// Value divided by the number of users.
    pub fn per_user(&self, k: usize) -> Dof {
        Dof(self.0 / Ratio::from_integer(k as u64))
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl fmt::Display for Dof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_to_lowest_terms() {
        let d = Dof::new(4, 6);
        assert_eq!((d.numer(), d.denom()), (2, 3));
        assert_eq!(d.to_string(), "2/3");
        assert_eq!(Dof::new(6, 3).to_string(), "2");
    }

    #[test]
    fn per_user_ratio() {
        assert_eq!(Dof::integer(20).per_user(30), Dof::new(2, 3));
        assert_eq!(Dof::integer(1).per_user(1), Dof::integer(1));
    }

    #[test]
    fn json_shape() {
        let json = serde_json::to_string(&Dof::new(3, 2)).unwrap();
        assert_eq!(json, r#"{"num":3,"den":2}"#);
        let back: Dof = serde_json::from_str(r#"{"num":6,"den":4}"#).unwrap();
        assert_eq!(back, Dof::new(3, 2));
        assert!(serde_json::from_str::<Dof>(r#"{"num":1,"den":0}"#).is_err());
    }
}
