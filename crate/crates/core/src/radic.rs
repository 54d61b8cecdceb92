//! Rationals inside the `r`-adic integers `ℤ_r`.
//!
//! A rational `p/q` with `gcd(q, r) = 1` is an element of `ℤ_r` whose base-`r`
//! digits are eventually periodic. Digits are stored least significant first
//! (`x_0` is the rightmost digit). Everything here is exact; the numerator type
//! is generic so the same code runs on `i64` or on `BigInt`.

use std::collections::HashMap;
use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use serde::ser::SerializeStruct;

use crate::{Error, Result};

/// Integer types usable as numerators and denominators.
pub trait AdicInt:
    Integer + Signed + Clone + FromPrimitive + ToPrimitive + Hash + Debug + Display
{
}

impl<T> AdicInt for T where
    T: Integer + Signed + Clone + FromPrimitive + ToPrimitive + Hash + Debug + Display
{
}

/// A reduced rational `num/den` viewed as an element of `ℤ_r`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RAdicRational<T> {
    num: T,
    den: T,
    base: u64,
}

fn lift<T: AdicInt>(x: u64) -> T {
    T::from_u64(x).expect("value fits the numerator type")
}

fn residue<T: AdicInt>(x: &T, m: u64) -> u64 {
    let m_t: T = lift(m);
    x.mod_floor(&m_t).to_u64().expect("residue fits u64")
}

impl<T: AdicInt> RAdicRational<T> {
    /// Reduces `num/den`; fails when the reduced denominator shares a factor
    /// with `base`.
    pub fn new(num: T, den: T, base: u64) -> Result<Self> {
        assert!(base >= 2, "base must be at least 2");
        if den.is_zero() {
            return Err(Error::Precondition("zero denominator".into()));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / g.clone(), den / g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let d_mod = den.gcd(&lift(base));
        if !d_mod.is_one() {
            return Err(Error::NotCoprime {
                base,
                modulus: den.to_u64().unwrap_or(u64::MAX),
            });
        }
        Ok(RAdicRational { num, den, base })
    }

    pub fn from_ratio(num: i64, den: i64, base: u64) -> Result<Self> {
        Self::new(
            T::from_i64(num).expect("fits"),
            T::from_i64(den).expect("fits"),
            base,
        )
    }

    pub fn integer(n: i64, base: u64) -> Self {
        Self::from_ratio(n, 1, base).expect("integers are always admissible")
    }

    pub fn zero(base: u64) -> Self {
        Self::integer(0, base)
    }

    pub fn num(&self) -> &T {
        &self.num
    }

    pub fn den(&self) -> &T {
        &self.den
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// The same rational viewed in `ℤ_base`.
    pub fn rebase(&self, base: u64) -> Result<Self> {
        Self::new(self.num.clone(), self.den.clone(), base)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    fn check_base(&self, other: &Self) {
        assert_eq!(self.base, other.base, "mixing r-adic bases");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_base(other);
        let num = self.num.clone() * other.den.clone() + other.num.clone() * self.den.clone();
        let den = self.den.clone() * other.den.clone();
        Self::new(num, den, self.base).expect("coprime denominators are closed under products")
    }

    pub fn neg(&self) -> Self {
        RAdicRational {
            num: -self.num.clone(),
            den: self.den.clone(),
            base: self.base,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul_int(&self, k: i64) -> Self {
        let k: T = T::from_i64(k).expect("fits");
        Self::new(self.num.clone() * k, self.den.clone(), self.base).expect("same denominator")
    }

    /// Integer multiple `k · self`, for `k` of the numerator type.
    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.num.clone() * k.clone(), self.den.clone(), self.base).expect("same denominator")
    }

    /// `(⌊num/den⌋, ⌈num/den⌉)` over the ordinary rationals.
    pub fn floor_ceil(&self) -> (T, T) {
        let fl = self.num.div_floor(&self.den);
        let ce = if self.is_integer() {
            fl.clone()
        } else {
            fl.clone() + T::one()
        };
        (fl, ce)
    }

    /// The eventually periodic base-`r` expansion, with the shortest
    /// preperiod and a primitive period.
    pub fn expand(&self) -> RAdicDigits {
        let r = self.base;
        let den_mod = residue(&self.den, r);
        let inv = mod_inverse(den_mod, r).expect("denominator coprime to base");
        let r_t: T = lift(r);
        let mut seen: HashMap<T, usize> = HashMap::new();
        let mut digits: Vec<u32> = Vec::new();
        let mut n = self.num.clone();
        loop {
            if let Some(&start) = seen.get(&n) {
                let period = digits.split_off(start);
                return RAdicDigits {
                    base: r,
                    preperiod: digits,
                    period,
                };
            }
            seen.insert(n.clone(), digits.len());
            let d = ((residue(&n, r) as u128 * inv as u128) % r as u128) as u64;
            digits.push(d as u32);
            let d_t: T = lift(d);
            let next = n - d_t * self.den.clone();
            debug_assert!((next.clone() % r_t.clone()).is_zero());
            n = next / r_t.clone();
        }
    }

    /// Exact value of an eventually periodic digit string.
    pub fn from_digits(digits: &RAdicDigits) -> Result<Self> {
        let r: T = lift(digits.base);
        let eval = |ds: &[u32]| -> T {
            ds.iter()
                .rev()
                .fold(T::zero(), |acc, &d| acc * r.clone() + lift::<T>(d as u64))
        };
        let pre = eval(&digits.preperiod);
        let per = eval(&digits.period);
        let shift = num_traits::pow(r.clone(), digits.preperiod.len());
        let cycle = num_traits::pow(r.clone(), digits.period.len());
        let den = T::one() - cycle;
        let num = pre * den.clone() + shift * per;
        Self::new(num, den, digits.base)
    }
}

impl<T: AdicInt> Display for RAdicRational<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl<T: AdicInt> Debug for RAdicRational<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (in Z_{})", self, self.base)
    }
}

impl<T: AdicInt> serde::Serialize for RAdicRational<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RAdicRational", 3)?;
        match (self.num.to_i64(), self.den.to_i64()) {
            (Some(n), Some(d)) => {
                st.serialize_field("num", &n)?;
                st.serialize_field("den", &d)?;
            }
            _ => {
                st.serialize_field("num", &self.num.to_string())?;
                st.serialize_field("den", &self.den.to_string())?;
            }
        }
        st.serialize_field("digits", &self.expand())?;
        st.end()
    }
}

/// An eventually periodic digit sequence of `ℤ_r`, least significant digit
/// first: the value is `preperiod` followed by `period` repeated forever.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct RAdicDigits {
    #[serde(skip)]
    pub base: u64,
    pub preperiod: Vec<u32>,
    pub period: Vec<u32>,
}

impl RAdicDigits {
    /// Renders most significant first, the repeating block in parentheses:
    /// `…1112` in base 3 becomes `(1)2`.
    pub fn render(&self) -> String {
        let digit = |d: &u32| -> String {
            if self.base <= 36 {
                std::char::from_digit(*d, self.base as u32).unwrap().to_string()
            } else {
                format!("[{d}]")
            }
        };
        let per: String = self.period.iter().rev().map(digit).collect();
        let pre: String = self.preperiod.iter().rev().map(digit).collect();
        format!("({per}){pre}")
    }

    /// True when the tail is all 0s or all (r−1)s, i.e. the value is an integer.
    pub fn is_integer(&self) -> bool {
        self.period.len() == 1 && (self.period[0] == 0 || self.period[0] as u64 == self.base - 1)
    }
}

impl Display for RAdicDigits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Least `p >= 1` with `r^p ≡ 1 (mod d)`.
pub fn mult_order(r: u64, d: u64) -> Result<u64> {
    if d == 0 || r.gcd(&d) != 1 {
        return Err(Error::NotCoprime { base: r, modulus: d });
    }
    if d == 1 {
        return Ok(1);
    }
    let mut x = r % d;
    let mut p = 1;
    while x != 1 {
        x = ((x as u128 * r as u128) % d as u128) as u64;
        p += 1;
    }
    Ok(p)
}

/// `1/q` generating the subgroup `⟨ℤ, α_1, …, α_n⟩ ⊂ ℚ`, with the integer
/// combination `constant + Σ coefficients[i]·α_i = 1/q` that witnesses it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicGenerator<T: AdicInt> {
    pub generator: RAdicRational<T>,
    pub constant: T,
    pub coefficients: Vec<T>,
}

/// `q = lcm` of the denominators; Bézout on `q` and the rescaled numerators
/// produces the combination equal to `1/q`.
pub fn cyclic_generator<T: AdicInt>(qs: &[RAdicRational<T>], base: u64) -> CyclicGenerator<T> {
    let q = qs.iter().fold(T::one(), |acc, x| acc.lcm(x.den()));
    let scaled: Vec<T> = qs
        .iter()
        .map(|x| x.num().clone() * (q.clone() / x.den().clone()))
        .collect();
    // Running Bézout: g = constant·q + Σ coefficients[i]·scaled[i].
    let mut g = q.clone();
    let mut constant = T::one();
    let mut coefficients = vec![T::zero(); qs.len()];
    for (i, s) in scaled.iter().enumerate() {
        let e = g.extended_gcd(s);
        constant = constant * e.x.clone();
        for c in coefficients.iter_mut().take(i) {
            *c = c.clone() * e.x.clone();
        }
        coefficients[i] = e.y;
        g = e.gcd;
    }
    debug_assert!(g.is_one() || qs.is_empty() || g == q);
    if g.is_negative() {
        constant = -constant;
        for c in coefficients.iter_mut() {
            *c = -c.clone();
        }
    }
    CyclicGenerator {
        generator: RAdicRational::new(T::one(), q, base).expect("lcm of coprime denominators"),
        constant,
        coefficients,
    }
}
