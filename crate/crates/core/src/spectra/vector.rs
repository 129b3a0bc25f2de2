use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact integer vector indexed by pattern rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigIntVector(Vec<BigInt>);

impl BigIntVector {
    pub fn new(components: Vec<BigInt>) -> Self {
        Self(components)
    }

    pub fn components(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> BigInt {
        self.0.iter().sum()
    }

    pub fn max(&self) -> Option<&BigInt> {
        self.0.iter().max()
    }

    pub fn min(&self) -> Option<&BigInt> {
        self.0.iter().min()
    }

    pub fn gcd(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(Signed::is_positive)
    }

    /// Divides out the content and fixes the sign so the first nonzero
    /// component is positive.
    pub fn primitive(mut self) -> Self {
        let g = self.gcd();
        if g.is_zero() {
            return self;
        }
        let flip = self.0.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative);
        for x in &mut self.0 {
            *x /= &g;
            if flip {
                *x = -&*x;
            }
        }
        self
    }

    /// First index where the vector differs from `counts`, if any.
    pub fn first_mismatch(&self, counts: &[u64]) -> Option<usize> {
        if self.0.len() != counts.len() {
            return Some(self.0.len().min(counts.len()));
        }
        self.0.iter().zip(counts).position(|(x, &c)| *x != BigInt::from(c))
    }
}

impl Serialize for BigIntVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        // Decimal strings so arbitrarily large components survive JSON.
        s.collect_seq(self.0.iter().map(|x| x.to_string()))
    }
}

impl<'de> Deserialize<'de> for BigIntVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let digits = Vec::<String>::deserialize(d)?;
        let components = digits
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| D::Error::custom(format!("bad component {s:?}: {e}"))))
            .collect::<Result<_, _>>()?;
        Ok(Self(components))
    }
}
