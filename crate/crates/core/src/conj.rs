//! Deciding topological conjugacy of two substitution shifts.

use num_integer::Integer;
use serde::Serialize;

use crate::autgroup::{search_generator, search_kernel, CandidateKappa, Reduction};
use crate::code::BlockCode;
use crate::language::Shift;
use crate::radic::mult_order;
use crate::substitution::Substitution;
use crate::{Error, Limits, RAdic, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Conjugate,
    NotConjugate,
    /// The inputs fall outside what the procedure handles.
    Incompatible,
    /// A resource cap stopped the search before a decision.
    Inconclusive,
}

impl Decision {
    pub fn exit_code(self) -> i32 {
        match self {
            Decision::Conjugate => 0,
            Decision::NotConjugate => 1,
            Decision::Incompatible => 2,
            Decision::Inconclusive => 3,
        }
    }
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Decision::Conjugate => "conjugate",
            Decision::NotConjugate => "not conjugate",
            Decision::Incompatible => "incompatible",
            Decision::Inconclusive => "inconclusive",
        })
    }
}

/// One fingerprint class `κ(W) ∈ -a/q + ℤ` and what the search found.
#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub kappa: RAdic,
    pub solutions: usize,
    pub invertible: usize,
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct ConjReport {
    pub decision: Decision,
    pub obstruction: Option<String>,
    /// `W: X_1 → X_2` on the original alphabets.
    pub witness: Option<BlockCode>,
    pub inverse: Option<BlockCode>,
    pub classes: Vec<ClassReport>,
    /// Powers `(m, n)` with `r_1^m = r_2^n` used to compare the shifts.
    pub powers: Option<(u32, u32)>,
}

impl ConjReport {
    fn stop(decision: Decision, why: impl Into<String>) -> Self {
        ConjReport {
            decision,
            obstruction: Some(why.into()),
            witness: None,
            inverse: None,
            classes: Vec::new(),
            powers: None,
        }
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Length gate: the lengths must be powers of one integer `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LengthGate {
    /// `r_1 = s^α`, `r_2 = s^β` with `gcd(α, β) = 1`.
    Common { s: u64, alpha: u32, beta: u32 },
    DifferentPrimes,
    NotPowers,
}

pub fn length_gate(r1: u64, r2: u64) -> LengthGate {
    let (f1, f2) = (factorize(r1), factorize(r2));
    if f1.len() != f2.len() || f1.iter().zip(&f2).any(|(a, b)| a.0 != b.0) {
        return LengthGate::DifferentPrimes;
    }
    // exponent vectors must be proportional
    let (e1, e2) = (f1[0].1, f2[0].1);
    let g = e1.gcd(&e2);
    let (alpha, beta) = (e1 / g, e2 / g);
    if f1.iter().zip(&f2).any(|(a, b)| a.1 * beta != b.1 * alpha) {
        return LengthGate::NotPowers;
    }
    let s = f1.iter().map(|&(p, e)| p.pow(e / alpha)).product();
    LengthGate::Common { s, alpha, beta }
}

/// Fingerprint classes tried for a conjugacy: `0`, then `-a/q` with
/// `1 < q <= (r-1)(r^j-1)` coprime to `r` and `0 < a < q` coprime to `q`.
pub fn candidate_classes(r: u64, j: usize) -> Vec<(u64, u64)> {
    let mut out = vec![(1, 0)];
    let top = (r as u128 - 1) * ((r as u128).saturating_pow(j as u32) - 1);
    let top = top.min(10_000) as u64;
    for q in 2..=top {
        if q.gcd(&r) != 1 {
            continue;
        }
        out.extend((1..q).filter(|a| a.gcd(&q) == 1).map(|a| (q, a)));
    }
    out
}

/// Searches for a conjugacy between the shifts of `s1` and `s2`.
pub fn decide_conjugacy(s1: &Substitution, s2: &Substitution, limits: &Limits) -> Result<ConjReport> {
    for (i, s) in [s1, s2].into_iter().enumerate() {
        if !s.is_primitive() {
            return Err(Error::Precondition(format!("substitution {} is not primitive", i + 1)));
        }
    }
    let (inf1, inf2) = (Shift::new(s1.clone()).is_infinite(), Shift::new(s2.clone()).is_infinite());
    match (inf1, inf2) {
        (false, false) => {
            return Ok(ConjReport::stop(Decision::Incompatible, "both shifts are finite"));
        }
        (true, false) | (false, true) => {
            return Ok(ConjReport::stop(
                Decision::NotConjugate,
                "exactly one of the shifts is finite",
            ));
        }
        _ => {}
    }
    let (r1, r2) = (s1.length() as u64, s2.length() as u64);
    let (alpha, beta) = match length_gate(r1, r2) {
        LengthGate::Common { alpha, beta, .. } => (alpha, beta),
        LengthGate::DifferentPrimes => {
            return Ok(ConjReport::stop(
                Decision::NotConjugate,
                format!("lengths {r1} and {r2} have different prime divisors"),
            ));
        }
        LengthGate::NotPowers => {
            return Ok(ConjReport::stop(
                Decision::Incompatible,
                format!("lengths {r1} and {r2} are not powers of a common integer"),
            ));
        }
    };
    let p1 = Reduction::new(s1, limits)?;
    let p2 = Reduction::new(s2, limits)?;
    let (h1, h2) = (p1.tower.h, p2.tower.h);
    if h1 != h2 {
        return Ok(ConjReport::stop(Decision::NotConjugate, format!("height {h1} ≠ {h2}")));
    }
    // bring both pure bases to the same length s^E
    let (k1, k2) = (alpha * p1.tower.power, beta * p2.tower.power);
    let e = k1.lcm(&k2);
    let (m1, m2) = (e / k1, e / k2);
    let red1 = if m1 > 1 { Reduction::with_base_power(s1, m1, limits)? } else { p1 };
    let red2 = if m2 > 1 { Reduction::with_base_power(s2, m2, limits)? } else { p2 };
    let powers = (red1.tower.power, red2.tower.power);
    let (c1, c2) = (red1.graph.c, red2.graph.c);
    if c1 != c2 {
        let mut rep = ConjReport::stop(Decision::NotConjugate, format!("column number {c1} ≠ {c2}"));
        rep.powers = Some(powers);
        return Ok(rep);
    }
    let r = red1.work.substitution().length() as u64;
    let mut classes = Vec::new();
    let mut capped = false;
    for (q, a) in candidate_classes(r, red1.graph.j) {
        let kappa = if q == 1 {
            RAdic::zero(r)
        } else {
            RAdic::from_ratio(-(a as i64), q as i64, r)?
        };
        let found = if q == 1 {
            search_kernel(&red1.work, &red2.work, c1, limits)
        } else {
            mult_order(r, q)
                .and_then(|_| CandidateKappa::new(r, c1, q, a, limits))
                .and_then(|cand| search_generator(&red1.work, &red2.work, &cand, limits))
        };
        let sols = match found {
            Ok(s) => s,
            Err(e @ Error::ResourceLimit { .. }) => {
                capped = true;
                classes.push(ClassReport {
                    kappa,
                    solutions: 0,
                    invertible: 0,
                    error: Some(e.to_string()),
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        let mut report = ClassReport {
            kappa,
            solutions: sols.len(),
            invertible: 0,
            error: None,
        };
        let mut witness = None;
        for w in &sols {
            match w.invert(&red1.work, &red2.work, limits.radius) {
                Ok(inv) => {
                    report.invertible += 1;
                    // narrowest witness first, so self-conjugacy reports the identity
                    let width = w.minimized(&red1.work).width();
                    if witness.as_ref().is_none_or(|(_, _, best)| width < *best) {
                        witness = Some((w.clone(), inv, width));
                    }
                }
                Err(Error::ResourceLimit { .. }) => capped = true,
                Err(_) => {}
            }
        }
        classes.push(report);
        if let Some((w, inv, _)) = witness {
            let lifted = red1.lift_to(&red2, &w)?;
            let back = red2.lift_to(&red1, &inv)?;
            let orig1 = &red1.original;
            let round = back.clone().without_kappa().compose(&lifted.clone().without_kappa(), orig1)?;
            if !round.equals(&BlockCode::identity(orig1), orig1) {
                return Err(Error::Internal("lifted conjugacy does not invert".into()));
            }
            return Ok(ConjReport {
                decision: Decision::Conjugate,
                obstruction: None,
                witness: Some(lifted),
                inverse: Some(back),
                classes,
                powers: Some(powers),
            });
        }
    }
    let (decision, why) = if capped {
        (Decision::Inconclusive, "a resource cap was reached before every class was searched")
    } else {
        (Decision::NotConjugate, "no fingerprint class admits a conjugacy")
    };
    Ok(ConjReport {
        decision,
        obstruction: Some(why.into()),
        witness: None,
        inverse: None,
        classes,
        powers: Some(powers),
    })
}
