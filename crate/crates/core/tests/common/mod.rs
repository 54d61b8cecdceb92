//! Oracles and fixtures shared by the integration tests. Every check here is
//! computed from first principles (plain set arithmetic, explicit words) and
//! not through the subset automaton or the r-adic module.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use autsub::{BlockCode, Letter, Limits, RAdic, Shift, Substitution};

pub const ABBC: &str = "a->abbc\nb->cbab\nc->cbba";
pub const ROOT: &str = "a->aba\nb->cba\nc->ccb";
pub const ROOT_PQR: &str = "P->PQP\nQ->RQP\nR->RRQ";
pub const THUE_MORSE: &str = "0->01\n1->10";
pub const PERIOD_DOUBLING: &str = "a->ab\nb->aa";

pub fn parse(text: &str) -> Substitution {
    Substitution::parse(text).unwrap()
}

/// Caps small enough that a random sample finishes in seconds.
pub fn test_limits() -> Limits {
    Limits {
        word_len: 200_000,
        radius: 8,
        search_nodes: 2_000_000,
        pmax: 16,
    }
}

/// Primitive, infinite, injective substitutions with `|𝒜| <= 3`, `r <= 4`.
/// Every other draw commutes with the cyclic letter permutation `a ↦ a+1`,
/// so nontrivial kernels show up regularly.
pub fn random_substitutions(seed: u64, count: usize) -> Vec<Substitution> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(2..=3);
        let r = rng.gen_range(2..=4);
        let rules: Vec<Vec<Letter>> = if rng.gen_bool(0.5) {
            let first: Vec<Letter> = (0..r).map(|_| rng.gen_range(0..n)).collect();
            (0..n).map(|k| first.iter().map(|&a| (a + k) % n).collect()).collect()
        } else {
            (0..n)
                .map(|_| (0..r).map(|_| rng.gen_range(0..n)).collect())
                .collect()
        };
        let names = ["a", "b", "c"][..n].iter().map(|s| s.to_string()).collect();
        let Ok(sub) = Substitution::new(names, rules) else {
            continue;
        };
        if sub.is_primitive() && sub.is_injective() && Shift::new(sub.clone()).is_infinite() {
            out.push(sub);
        }
    }
    out
}

/// `θ_{w_0} ∘ … ∘ θ_{w_{k-1}}(𝒜)` by direct set images, `θ_i(a)` being the
/// `i`-th letter of the rule for `a`.
pub fn brute_image(sub: &Substitution, digits: &[usize]) -> BTreeSet<Letter> {
    let mut set: BTreeSet<Letter> = (0..sub.size()).collect();
    for &d in digits.iter().rev() {
        set = set.iter().map(|&a| sub.rules()[a][d]).collect();
    }
    set
}

/// Least image size over all compositions, by closing the family of images.
pub fn brute_column_number(sub: &Substitution) -> usize {
    let mut seen: BTreeSet<BTreeSet<Letter>> = BTreeSet::from([(0..sub.size()).collect()]);
    let mut todo: Vec<BTreeSet<Letter>> = seen.iter().cloned().collect();
    while let Some(set) = todo.pop() {
        for d in 0..sub.length() {
            let img: BTreeSet<Letter> = set.iter().map(|&a| sub.rules()[a][d]).collect();
            if seen.insert(img.clone()) {
                todo.push(img);
            }
        }
    }
    seen.iter().map(|s| s.len()).min().unwrap()
}

/// All digit words of length `1..=max_len` over `0..r`.
pub fn all_words(r: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        level = level
            .iter()
            .flat_map(|w| {
                (0..r).map(move |d| {
                    let mut v = w.clone();
                    v.push(d);
                    v
                })
            })
            .collect();
        out.extend(level.iter().cloned());
    }
    out
}

/// `num/den mod m` for `gcd(den, m) = 1`, by exhaustive search for the inverse.
pub fn residue(x: &RAdic, m: u64) -> u64 {
    let mb = BigInt::from(m);
    let num = x.num().mod_floor(&mb);
    let den = x.den().mod_floor(&mb);
    let inv = (0..m)
        .find(|&i| (&den * i).mod_floor(&mb) == BigInt::from(1u32))
        .expect("denominator invertible mod r^n");
    let v = (num * inv).mod_floor(&mb);
    u64::try_from(v).unwrap()
}

/// Outcome of locating the `θ^n`-block grid of `Φ(x)` for a point `x` with
/// `π(x) = 0`.
#[derive(Debug, PartialEq, Eq)]
pub enum Alignment {
    /// The grid sits at positions `≡ ρ (mod r^n)`.
    Found(u64),
    /// Several residues are consistent with the window.
    Ambiguous,
    /// No residue works: the image is not a legal point.
    None,
}

/// Applies `code` to `θ^m(ba)` (origin between the two blocks) and finds the
/// residues `ρ` for which the image splits into words `θ^n(a)` at `ρ + r^n ℤ`.
pub fn block_alignment(sub: &Substitution, code: &BlockCode, seed: (Letter, Letter), m: u32, n: u32) -> Alignment {
    let r = sub.length();
    let u = sub.apply_power(&[seed.0, seed.1], m, usize::MAX).unwrap();
    let origin = r.pow(m) as i64;
    let v = code.apply(&u).unwrap();
    let blocks: BTreeSet<Vec<Letter>> = (0..sub.size())
        .map(|a| sub.power_word(a, n, usize::MAX).unwrap())
        .collect();
    let rn = r.pow(n) as i64;
    // v[i] is the image at x-position i + left - origin
    let shift = code.left() as i64 - origin;
    let mut found = Vec::new();
    for rho in 0..rn {
        let ok = (0..v.len() as i64)
            .filter(|&i| (i + shift - rho).rem_euclid(rn) == 0)
            .filter(|&i| i + rn <= v.len() as i64)
            .all(|i| blocks.contains(&v[i as usize..(i + rn) as usize]));
        if ok {
            found.push(rho as u64);
        }
    }
    match found.as_slice() {
        [] => Alignment::None,
        [rho] => Alignment::Found(*rho),
        _ => Alignment::Ambiguous,
    }
}

/// A legal two-letter word, used as the seed of a point with `π = 0`.
pub fn seed(shift: &Shift) -> (Letter, Letter) {
    let w = shift.words(2).iter().next().unwrap().clone();
    (w[0], w[1])
}

/// Empirical fingerprint check: `Φ(x)` has its `θ^n` grid at `-κ(Φ) mod r^n`.
/// `Some(true)` agrees, `Some(false)` contradicts, `None` is undetermined.
pub fn kappa_matches(shift: &Shift, code: &BlockCode, n: u32) -> Option<bool> {
    let sub = shift.substitution();
    let r = sub.length() as u64;
    let rn = r.pow(n);
    let kappa = code.kappa().expect("code with a fingerprint");
    // enough blocks of size r^n on each side of the origin
    let mut m = n;
    while (r as usize).pow(m) < 48 * rn as usize + 2 * code.width() {
        m += 1;
    }
    match block_alignment(sub, code, seed(shift), m, n) {
        Alignment::Found(rho) => Some((rho + residue(kappa, rn)).is_multiple_of(rn)),
        Alignment::Ambiguous => None,
        Alignment::None => Some(false),
    }
}

/// `Σ c_i x_i` over the rationals.
pub fn combination(xs: &[(i64, i64)], cs: &[i64]) -> (i64, i64) {
    xs.iter().zip(cs).fold((0, 1), |(n, d), (&(xn, xd), &c)| {
        let num = n * xd + c * xn * d;
        let den = d * xd;
        let g = num.gcd(&den);
        (num / g, den / g)
    })
}
