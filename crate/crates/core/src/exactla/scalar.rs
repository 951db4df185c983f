use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LaError;

/// Ground field: the rationals or a prime field F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
}

/// Field element. Rationals use a machine-word fast path and fall back to
/// big integers on overflow; the representation is canonical so `==` is
/// value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Small(i64, i64),
    Big(Box<BigRational>),
    Mod(u64, u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, LaError> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(LaError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Small(0, 1),
            Field::Prime(p) => Scalar::Mod(0, *p),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Small(n, 1),
            Field::Prime(p) => Scalar::Mod(n.rem_euclid(*p as i64) as u64, *p),
        }
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar, LaError> {
        match self {
            Field::Rationals => Ok(Scalar::from_big(r.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(*p);
                let num = r.numer().mod_floor(&pb).to_u64().unwrap();
                let den = r.denom().mod_floor(&pb).to_u64().unwrap();
                if den == 0 {
                    return Err(LaError::NotInvertible(format!("{} mod {}", r, p)));
                }
                let inv = Scalar::Mod(den, *p).inv().unwrap();
                Ok(Scalar::Mod(num, *p) * inv)
            }
        }
    }

    /// Parses "3", "-2/5" and similar.
    pub fn parse(&self, s: &str) -> Result<Scalar, LaError> {
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| LaError::Parse(s.to_string()))?;
        let d: BigInt = d.parse().map_err(|_| LaError::Parse(s.to_string()))?;
        if d.is_zero() {
            return Err(LaError::Parse(s.to_string()));
        }
        self.from_rational(&BigRational::new(n, d))
    }

    /// Small random element; for Q an integer in [-bound, bound].
    pub fn random<R: Rng>(&self, rng: &mut R, bound: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Small(rng.gen_range(-bound..=bound), 1),
            Field::Prime(p) => Scalar::Mod(rng.gen_range(0..*p), *p),
        }
    }

    /// All elements when the field is finite.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some((0..*p).map(|v| Scalar::Mod(v, *p)).collect()),
        }
    }

    pub fn zeros(&self, n: usize) -> Vec<Scalar> {
        vec![self.zero(); n]
    }

    pub fn unit_vector(&self, n: usize, i: usize) -> Vec<Scalar> {
        let mut v = self.zeros(n);
        v[i] = self.one();
        v
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{}", p),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Field::Rationals => s.serialize_str("Q"),
            Field::Prime(p) => {
                use serde::ser::SerializeMap;
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("Fp", p)?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Name(String),
            Prime {
                #[serde(rename = "Fp")]
                fp: u64,
            },
        }
        match Repr::deserialize(d)? {
            Repr::Name(n) if n == "Q" => Ok(Field::Rationals),
            Repr::Name(n) => match n.strip_prefix('F').and_then(|t| t.parse::<u64>().ok()) {
                Some(p) => Field::prime(p).map_err(serde::de::Error::custom),
                None => Err(serde::de::Error::custom(format!("unknown field {:?}", n))),
            },
            Repr::Prime { fp } => Field::prime(fp).map_err(serde::de::Error::custom),
        }
    }
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl Scalar {
    fn from_i128(n: i128, d: i128) -> Scalar {
        let (mut n, mut d) = (n, d);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = gcd_i128(n, d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        if n == 0 {
            return Scalar::Small(0, 1);
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(a), Ok(b)) => Scalar::Small(a, b),
            _ => Scalar::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: BigRational) -> Scalar {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(a), Some(b)) => Scalar::Small(a, b),
            _ => Scalar::Big(Box::new(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Scalar::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Scalar::Big(b) => (**b).clone(),
            Scalar::Mod(..) => panic!("modular scalar used as rational"),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Small(n, _) => *n == 0,
            Scalar::Big(_) => false,
            Scalar::Mod(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Small(n, d) => *n == 1 && *d == 1,
            Scalar::Big(_) => false,
            Scalar::Mod(v, _) => *v == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Small(n, d) => Scalar::from_i128(*d as i128, *n as i128),
            Scalar::Big(b) => Scalar::from_big(b.recip()),
            Scalar::Mod(v, p) => Scalar::Mod(mod_pow(*v, p - 2, *p), *p),
        })
    }

    /// Residue for modular scalars; used by the fast F_p kernels.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Mod(v, _) => Some(*v),
            _ => None,
        }
    }

    /// Integer value when the scalar is an integer (rationals) or a residue.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Small(n, 1) => Some(*n),
            Scalar::Mod(v, _) => Some(*v as i64),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Mod(..) => None,
            _ => Some(self.to_big()),
        }
    }

    fn add_ref(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Mod(a, p), Scalar::Mod(b, _)) => Scalar::Mod((a + b) % p, *p),
            (Scalar::Small(a, b), Scalar::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_add(*c) {
                        return Scalar::Small(s, 1);
                    }
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match (a.checked_mul(d), c.checked_mul(b), b.checked_mul(d)) {
                    (Some(x), Some(y), Some(z)) => match x.checked_add(y) {
                        Some(s) => Scalar::from_i128(s, z),
                        None => Scalar::from_big(self.to_big() + o.to_big()),
                    },
                    _ => Scalar::from_big(self.to_big() + o.to_big()),
                }
            }
            _ => Scalar::from_big(self.to_big() + o.to_big()),
        }
    }

    fn mul_ref(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Mod(a, p), Scalar::Mod(b, _)) => Scalar::Mod(a * b % p, *p),
            (Scalar::Small(a, b), Scalar::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_mul(*c) {
                        return Scalar::Small(s, 1);
                    }
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Scalar::from_i128(a * c, b * d)
            }
            _ => Scalar::from_big(self.to_big() * o.to_big()),
        }
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Mod(a, p) => Scalar::Mod((p - a) % p, *p),
            Scalar::Small(a, b) => match a.checked_neg() {
                Some(n) => Scalar::Small(n, *b),
                None => Scalar::from_big(-self.to_big()),
            },
            Scalar::Big(r) => Scalar::from_big(-(**r).clone()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Small(n, 1) => write!(f, "{}", n),
            Scalar::Small(n, d) => write!(f, "{}/{}", n, d),
            Scalar::Big(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod(v, _) => write!(f, "{}", v),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.add_ref(o)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        self.add_ref(&o)
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.add_ref(&o.neg_ref())
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        self.add_ref(&o.neg_ref())
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.mul_ref(o)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        self.mul_ref(&o)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = self.add_ref(o);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = self.add_ref(&o.neg_ref());
    }
}

impl Scalar {
    /// Sign of a rational scalar (used only for deterministic display).
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Small(n, _) => *n < 0,
            Scalar::Big(r) => r.is_negative(),
            Scalar::Mod(..) => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_overflow_promotes_and_demotes() {
        let q = Field::Rationals;
        let big = q.from_i64(i64::MAX);
        let s = &big + &big;
        assert!(matches!(s, Scalar::Big(_)));
        let back = &s - &big;
        assert_eq!(back, big);
        let half = q.parse("1/2").unwrap();
        assert_eq!(&half + &half, q.one());
    }

    #[test]
    fn modular_inverse() {
        let f = Field::prime(7).unwrap();
        for v in 1..7 {
            let x = f.from_i64(v);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
        assert_eq!(f.parse("1/2").unwrap(), f.from_i64(4));
    }

    #[test]
    fn field_json_roundtrip() {
        let f: Field = serde_json::from_str("\"Q\"").unwrap();
        assert_eq!(f, Field::Rationals);
        let g: Field = serde_json::from_str("{\"Fp\":3}").unwrap();
        assert_eq!(g, Field::Prime(3));
        assert_eq!(serde_json::to_string(&g).unwrap(), "{\"Fp\":3}");
        assert!(serde_json::from_str::<Field>("{\"Fp\":4}").is_err());
    }
}
