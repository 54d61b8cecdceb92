//! Automorphism groups: fingerprint candidates, the 2-block generator and
//! 3-block kernel searches, the presentation, and the lifts back through
//! injectivization and the height tower.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::BlockCode;
use crate::language::{Infiniteness, Shift};
use crate::radic::mult_order;
use crate::reduce::{height, injectivize, pure_base, HeightReport, Injectivization, TowerConjugacy};
use crate::search::{Csp, Forcing};
use crate::smith::abelian_group_name;
use crate::sofic::{subset_graph, Admissibility, SubsetAutomaton};
use crate::substitution::{Letter, Substitution, Word};
use crate::{Error, Limits, RAdic, Result};

/// A fingerprint `κ = k/(1 - r^p) = -a/d` together with the data of the
/// commutation relation `θ^{-M} ∘ σ^{-N} ∘ Φ ∘ θ^M = Φ`, `M = c!·p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateKappa {
    pub d: u64,
    pub a: u64,
    pub p: u64,
    #[serde(serialize_with = "as_string")]
    pub k: BigInt,
    /// `M = c!·p`, when it fits.
    pub exponent: Option<u32>,
    /// `N = k(1 + r^p + … + r^{(c!-1)p})`, when `r^M` is within the word cap.
    pub n_offset: Option<usize>,
    pub kappa: RAdic,
}

fn as_string<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn factorial(c: usize) -> Option<u64> {
    (1..=c as u64).try_fold(1u64, |acc, i| acc.checked_mul(i))
}

impl CandidateKappa {
    /// `κ = -a/d` with `0 < a < d`, `gcd(a, d) = gcd(d, r) = 1`, for a
    /// substitution with column number `c`.
    pub fn new(r: u64, c: usize, d: u64, a: u64, limits: &Limits) -> Result<Self> {
        let p = mult_order(r, d)?;
        let rp = BigInt::from(r).pow(p as u32);
        let k = BigInt::from(a) * (&rp - 1u32) / BigInt::from(d);
        let exponent = factorial(c)
            .and_then(|f| f.checked_mul(p))
            .and_then(|m| u32::try_from(m).ok());
        let big_r = exponent
            .and_then(|m| (r as u128).checked_pow(m))
            .filter(|&x| x <= limits.word_len as u128);
        // N = k (R - 1)/(r^p - 1) = a (R - 1)/d
        let n_offset = big_r.map(|big_r| (a as u128 * (big_r - 1) / d as u128) as usize);
        let kappa = RAdic::new(-BigInt::from(a), BigInt::from(d), r)?;
        Ok(CandidateKappa {
            d,
            a,
            p,
            k,
            exponent,
            n_offset,
            kappa,
        })
    }

    /// `(M, N)`, or a resource error when `r^M` exceeds the word cap.
    pub fn commutation(&self, limits: &Limits) -> Result<(u32, usize)> {
        match (self.exponent, self.n_offset) {
            (Some(m), Some(n)) => Ok((m, n)),
            _ => Err(Error::ResourceLimit {
                what: "commutation exponent r^(c!p)",
                cap: limits.word_len as u64,
            }),
        }
    }
}

/// Fingerprint candidates `-1/d`, `d` from `r^j - 1` down to 2, coprime to
/// `r`, each with its prune verdict.
pub fn candidate_kappas(
    sub: &Substitution,
    graph: &SubsetAutomaton,
    limits: &Limits,
) -> Result<Vec<(CandidateKappa, Admissibility)>> {
    let r = sub.length() as u64;
    let top = (r as u128).checked_pow(graph.j as u32).map_or(u64::MAX, |x| (x - 1).min(u64::MAX as u128) as u64);
    let mut out = Vec::new();
    for d in (2..=top).rev() {
        if d.gcd(&r) != 1 {
            continue;
        }
        let cand = CandidateKappa::new(r, graph.c, d, 1, limits)?;
        let verdict = graph.kappa_admissible(&cand.kappa, limits.pmax);
        out.push((cand, verdict));
    }
    Ok(out)
}

fn indexed(words: &std::collections::BTreeSet<Word>) -> HashMap<Word, usize> {
    words.iter().cloned().zip(0..).collect()
}

fn allowed_pairs(dst: &Shift) -> Vec<bool> {
    let n = dst.substitution().size();
    let mut allowed = vec![false; n * n];
    for w in dst.words(2).iter() {
        allowed[w[0] * n + w[1]] = true;
    }
    allowed
}

/// Every `f: L_2(src) → 𝒜'` whose code `Φ^f_{1,0}` is a conjugacy onto
/// `dst` with fingerprint `cand.kappa`; for `src = dst` these are the
/// automorphisms with that fingerprint.
pub fn search_generator(
    src: &Shift,
    dst: &Shift,
    cand: &CandidateKappa,
    limits: &Limits,
) -> Result<Vec<BlockCode>> {
    let s = src.substitution();
    let t = dst.substitution();
    let n = t.size();
    let (exponent, n_offset) = cand.commutation(limits)?;
    let big_r = s.length().pow(exponent);
    let l2 = src.words(2);
    let var = indexed(&l2);
    let allowed = allowed_pairs(dst);

    let mut images = vec![Word::new(); n * n];
    for w in dst.words(2).iter() {
        images[w[0] * n + w[1]] = t.apply_power(w, exponent, limits.word_len.max(2))?;
    }
    let mut pairs = Vec::new();
    let mut forcings = Vec::new();
    let mut cache: HashMap<&[Letter], Word> = HashMap::new();
    let l3 = src.words(3);
    for w in l3.iter() {
        let (p1, p2) = (var[&w[0..2]], var[&w[1..3]]);
        pairs.push((p1, p2));
        if !cache.contains_key(&w[0..2]) {
            cache.insert(&w[0..2], s.apply_power(&w[0..2], exponent, limits.word_len.max(2))?);
        }
        let u = &cache[&w[0..2]];
        for i in 0..big_r {
            let child = var[&u[big_r + i - 1..big_r + i + 1]];
            forcings.push(Forcing {
                parents: [p1, p2],
                arity: 2,
                child,
                offset: n_offset + i,
            });
        }
    }
    let csp = Csp::new(l2.len(), n, pairs, allowed, forcings, images);
    let keys: Vec<&Word> = l2.iter().collect();
    Ok(csp
        .solve(limits.search_nodes)?
        .into_iter()
        .map(|vals| {
            let table = keys.iter().map(|w| ((*w).clone(), vals[var[*w]])).collect();
            BlockCode::from_table(1, 0, table, s.size(), n).with_kappa(cand.kappa.clone())
        })
        .collect())
}

/// Every `g: L_3(src) → 𝒜'` whose code `Φ^g_{1,1}` is a conjugacy onto
/// `dst` with fingerprint 0 (for `src = dst`: the kernel of `κ`).
pub fn search_kernel(src: &Shift, dst: &Shift, c: usize, limits: &Limits) -> Result<Vec<BlockCode>> {
    let s = src.substitution();
    let t = dst.substitution();
    let n = t.size();
    let too_big = Error::ResourceLimit {
        what: "commutation exponent r^(c!)",
        cap: limits.word_len as u64,
    };
    let exponent = factorial(c).and_then(|f| u32::try_from(f).ok()).ok_or(too_big.clone())?;
    let big_r = (s.length() as u128)
        .checked_pow(exponent)
        .filter(|&x| 3 * x <= limits.word_len as u128)
        .ok_or(too_big)? as usize;
    let l3 = src.words(3);
    let var = indexed(&l3);
    let allowed = allowed_pairs(dst);
    let images = (0..n)
        .map(|a| t.power_word(a, exponent, limits.word_len))
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for w in src.words(4).iter() {
        pairs.push((var[&w[0..3]], var[&w[1..4]]));
    }
    let mut forcings = Vec::new();
    for w in l3.iter() {
        let parent = var[w];
        let u = s.apply_power(w, exponent, limits.word_len)?;
        for i in 0..big_r {
            forcings.push(Forcing {
                parents: [parent, parent],
                arity: 1,
                child: var[&u[big_r + i - 1..big_r + i + 2]],
                offset: i,
            });
        }
    }
    let csp = Csp::new(l3.len(), n, pairs, allowed, forcings, images);
    let zero = RAdic::zero(s.length() as u64);
    let keys: Vec<&Word> = l3.iter().collect();
    Ok(csp
        .solve(limits.search_nodes)?
        .into_iter()
        .map(|vals| {
            let table = keys.iter().map(|w| ((*w).clone(), vals[var[*w]])).collect();
            BlockCode::from_table(1, 1, table, s.size(), n).with_kappa(zero.clone())
        })
        .collect())
}

/// A substitution reduced to an injective pure base, with the maps back.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub original: Shift,
    pub height: HeightReport,
    pub tower: TowerConjugacy,
    pub base: Shift,
    pub inj: Injectivization,
    pub work: Shift,
    pub graph: SubsetAutomaton,
}

impl Reduction {
    pub fn new(sub: &Substitution, limits: &Limits) -> Result<Self> {
        Self::with_base_power(sub, 1, limits)
    }

    /// As [`new`](Self::new), with the pure base replaced by its `m`-th power.
    pub fn with_base_power(sub: &Substitution, m: u32, limits: &Limits) -> Result<Self> {
        let original = Shift::new(sub.clone());
        if !sub.is_primitive() {
            return Err(Error::Precondition("substitution is not primitive".into()));
        }
        if !original.is_infinite() {
            return Err(Error::Precondition("the shift is finite (periodic)".into()));
        }
        let height = height(sub);
        let mut tower = pure_base(sub)?;
        if m > 1 {
            tower.base = tower.base.power(m, limits.word_len)?;
            tower.power *= m;
        }
        let base = Shift::new(tower.base.clone());
        let inj = injectivize(&tower.base, limits.radius)?;
        let work = Shift::new(inj.target.clone());
        let graph = subset_graph(&inj.target)?;
        Ok(Reduction {
            original,
            height,
            tower,
            base,
            inj,
            work,
            graph,
        })
    }

    /// Moves a code `work → other.work` to a code `original → other.original`.
    pub fn lift_to(&self, other: &Reduction, code: &BlockCode) -> Result<BlockCode> {
        let inner = code.compose(&self.inj.forward, &self.base)?;
        let on_base = other.inj.inverse.compose(&inner, &self.base)?.minimized(&self.base);
        let lifted = self.tower.lift_to(&other.tower, &on_base, &self.original)?;
        let r = self.original.substitution().length() as u64;
        Ok(match lifted.kappa() {
            Some(k) if k.base() != r => {
                let k = k.rebase(r)?;
                lifted.with_kappa(k)
            }
            _ => lifted,
        })
    }

    pub fn lift(&self, code: &BlockCode) -> Result<BlockCode> {
        self.lift_to(self, code)
    }
}

/// The one-sided automorphism group, as far as it is decided.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OneSided {
    Trivial,
    Unknown { bound: usize },
}

impl std::fmt::Display for OneSided {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OneSided::Trivial => f.write_str("trivial"),
            OneSided::Unknown { bound } => write!(f, "unknown, bound {bound}"),
        }
    }
}

/// Trivial when the shift has height one and a coincidence; otherwise only
/// the column number bounds the part of the group not ruled out.
pub fn one_sided_aut(h: usize, c: usize) -> OneSided {
    if h == 1 && c == 1 {
        OneSided::Trivial
    } else {
        OneSided::Unknown { bound: c }
    }
}

/// One fingerprint candidate and what happened to it.
#[derive(Clone, Debug, Serialize)]
pub struct CandidateReport {
    pub candidate: CandidateKappa,
    pub admissibility: Admissibility,
    pub searched: bool,
    pub solutions: usize,
}

/// `Ψ = G^{d/e} ∘ σ^{h/e}` with `e = gcd(d, h) > 1`; `Ψ^order = id`.
#[derive(Clone, Debug)]
pub struct TorsionWitness {
    pub code: BlockCode,
    pub order: usize,
}

#[derive(Clone, Debug)]
pub struct HeightLift {
    pub h: usize,
    pub gcd: usize,
    pub cyclic: bool,
    pub torsion: Option<TorsionWitness>,
}

/// `Aut(X_θ, σ)` as `ker κ ⋊ ⟨G⟩`, with every code on the original alphabet.
///
/// `G` is the root (fingerprint `-h/d` in units of the original shift) when
/// some `d > 1` is realized; otherwise the group is generated by `σ` and the
/// kernel. The defining relation is `G^d ∘ σ^h = kernel[k0]`.
#[derive(Clone, Debug)]
pub struct AutPresentation {
    pub reduction: Reduction,
    pub candidates: Vec<CandidateReport>,
    pub kernel: Vec<BlockCode>,
    /// `kernel[table[a][b]] = kernel[a] ∘ kernel[b]`.
    pub table: Vec<Vec<usize>>,
    pub root: Option<BlockCode>,
    pub d: u64,
    pub k0: usize,
    /// Least `k'` with `G^{d k'} = σ^{-h k'}`.
    pub power_order: usize,
    /// `G ∘ kernel[i] = kernel[action[i]] ∘ G`.
    pub action: Vec<usize>,
    pub relations: Vec<String>,
    pub generators: Vec<String>,
    pub abelian: bool,
    pub iso_type: String,
    pub height_lift: Option<HeightLift>,
    pub one_sided: OneSided,
}

fn kernel_name(i: usize) -> String {
    if i == 0 {
        "id".into()
    } else {
        format!("K{i}")
    }
}

fn power_name(base: &str, e: i64) -> String {
    match e {
        0 => "id".into(),
        1 => base.into(),
        _ => format!("{base}^{e}"),
    }
}

/// Index of the kernel element equal to `code`.
fn find(kernel: &[BlockCode], code: &BlockCode, shift: &Shift) -> Option<usize> {
    kernel.iter().position(|k| k.equals(code, shift))
}

/// Multiplication table, after putting the identity first.
fn kernel_table(kernel: &mut Vec<BlockCode>, shift: &Shift) -> Result<Vec<Vec<usize>>> {
    let id = BlockCode::identity(shift);
    let pos = find(kernel, &id, shift)
        .ok_or_else(|| Error::Internal("identity missing from the kernel".into()))?;
    let e = kernel.remove(pos);
    kernel.insert(0, e);
    let mut table = vec![vec![0; kernel.len()]; kernel.len()];
    for a in 0..kernel.len() {
        for b in 0..kernel.len() {
            let prod = kernel[a].compose(&kernel[b], shift)?;
            table[a][b] = find(kernel, &prod, shift)
                .ok_or_else(|| Error::Internal("kernel is not closed under composition".into()))?;
        }
    }
    Ok(table)
}

fn element_order(table: &[Vec<usize>], x: usize) -> usize {
    let mut y = x;
    let mut n = 1;
    while y != 0 {
        y = table[y][x];
        n += 1;
    }
    n
}

/// Full pipeline: reduce, search, assemble, lift and re-verify.
pub fn aut_group(sub: &Substitution, limits: &Limits) -> Result<AutPresentation> {
    let red = Reduction::new(sub, limits)?;
    let work = &red.work;
    let graph = &red.graph;

    let mut kernel_w = search_kernel(work, work, graph.c, limits)?;
    let table = kernel_table(&mut kernel_w, work)?;

    let cands = candidate_kappas(work.substitution(), graph, limits)?;
    // Admissible candidates are searched concurrently; results stay in order.
    let found: Vec<Result<Option<Vec<BlockCode>>>> = cands
        .par_iter()
        .map(|(cand, verdict)| {
            if verdict.is_accept() {
                search_generator(work, work, cand, limits).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect();
    let mut candidates = Vec::new();
    let mut root_w: Option<(u64, BlockCode)> = None;
    for ((cand, verdict), res) in cands.into_iter().zip(found) {
        let sols = res?;
        if root_w.is_none() {
            if let Some(first) = sols.as_ref().and_then(|s| s.first()) {
                root_w = Some((cand.d, first.clone()));
            }
        }
        candidates.push(CandidateReport {
            searched: sols.is_some(),
            solutions: sols.map_or(0, |s| s.len()),
            candidate: cand,
            admissibility: verdict,
        });
    }

    // Lift to the original alphabet.
    let orig = &red.original;
    let h = red.tower.h;
    let mut kernel: Vec<BlockCode> = kernel_w.iter().map(|k| red.lift(k)).collect::<Result<_>>()?;
    let lifted_table = kernel_table(&mut kernel, orig)?;
    if lifted_table != table {
        return Err(Error::Internal("kernel table changed under lifting".into()));
    }
    let (d, root) = match &root_w {
        Some((d, g)) => (*d, Some(red.lift(g)?)),
        None => (1, None),
    };
    // G := σ^{-h} when no root exists, so the relations below read uniformly.
    let g = match &root {
        Some(g) => g.clone(),
        None => BlockCode::shift_power(orig, -(h as i64)),
    };
    let g_name = if root.is_some() { "G" } else { "σ" };
    let shift_h = BlockCode::shift_power(orig, h as i64);

    let gd = g.power(d as usize, orig)?;
    let k0 = find(&kernel, &gd.compose(&shift_h, orig)?, orig)
        .ok_or_else(|| Error::Internal("G^d ∘ σ^h is not in the kernel".into()))?;
    let power_order = element_order(&table, k0);
    let lhs = g.power(d as usize * power_order, orig)?;
    let rhs = BlockCode::shift_power(orig, -((h * power_order) as i64));
    if !lhs.equals(&rhs, orig) {
        return Err(Error::Internal("power relation failed to verify".into()));
    }
    let mut action = Vec::with_capacity(kernel.len());
    for k in &kernel {
        let left = g.compose(k, orig)?;
        let idx = kernel
            .iter()
            .position(|k2| k2.compose(&g, orig).is_ok_and(|c| c.equals(&left, orig)))
            .ok_or_else(|| Error::Internal("G does not normalize the kernel".into()))?;
        action.push(idx);
    }

    let mut relations = Vec::new();
    let shift_term = power_name("σ", h as i64);
    if root.is_some() {
        relations.push(format!(
            "{} ∘ {} = {}",
            power_name("G", d as i64),
            shift_term,
            kernel_name(k0)
        ));
        relations.push(format!(
            "{} = {}",
            power_name("G", (d as usize * power_order) as i64),
            power_name("σ", -((h * power_order) as i64))
        ));
    }
    for i in 1..kernel.len() {
        relations.push(format!(
            "{} = id",
            power_name(&kernel_name(i), element_order(&table, i) as i64)
        ));
        relations.push(format!(
            "{g_name} ∘ {} = {} ∘ {g_name}",
            kernel_name(i),
            kernel_name(action[i])
        ));
        for j in 1..kernel.len() {
            if i < j {
                relations.push(format!(
                    "{} ∘ {} = {}",
                    kernel_name(i),
                    kernel_name(j),
                    kernel_name(table[i][j])
                ));
            }
        }
    }

    let abelian_kernel = (0..kernel.len()).all(|a| (0..kernel.len()).all(|b| table[a][b] == table[b][a]));
    let abelian = abelian_kernel && action.iter().enumerate().all(|(i, &j)| i == j);
    let m = kernel.len();
    let kernel_relations: Vec<Vec<i64>> = table_relations(&table, 0);
    let iso_type = if abelian {
        // generators: G, σ, e_0 … e_{m-1}
        let mut rels: Vec<Vec<i64>> = kernel_relations
            .iter()
            .map(|r| [vec![0, 0], r.clone()].concat())
            .collect();
        let mut main = vec![0i64; m + 2];
        main[0] = d as i64;
        main[1] = h as i64;
        main[2 + k0] -= 1;
        rels.push(main);
        abelian_group_name(m + 2, &rels)
    } else {
        let k_name = if abelian_kernel {
            abelian_group_name(m, &kernel_relations)
        } else {
            format!("K{m}")
        };
        format!("{k_name} ⋊ Z")
    };

    let mut generators = vec![g_name.to_owned()];
    if h > 1 && root.is_some() {
        generators.push("σ".into());
    }
    generators.extend(minimal_kernel_generators(&table).into_iter().map(kernel_name));

    let height_lift = if h > 1 {
        let e = (d as usize).gcd(&h);
        let torsion = if e > 1 {
            let psi = g
                .power(d as usize / e, orig)?
                .compose(&BlockCode::shift_power(orig, (h / e) as i64), orig)?;
            let id = BlockCode::identity(orig);
            let mut acc = psi.clone();
            let mut order = 1;
            while !acc.equals(&id, orig) {
                if order > e * m {
                    return Err(Error::Internal("torsion witness has unexpected order".into()));
                }
                acc = acc.compose(&psi, orig)?.minimized(orig);
                order += 1;
            }
            Some(TorsionWitness { code: psi, order })
        } else {
            None
        };
        Some(HeightLift {
            h,
            gcd: e,
            cyclic: iso_type == "Z",
            torsion,
        })
    } else {
        None
    };
    let one_sided = one_sided_aut(h, graph.c);
    Ok(AutPresentation {
        reduction: red,
        candidates,
        kernel,
        table,
        root,
        d,
        k0,
        power_order,
        action,
        relations,
        generators,
        abelian,
        iso_type,
        height_lift,
        one_sided,
    })
}

/// Rows `e_a + e_b - e_{ab}` of a multiplication table, plus `e_id`, with
/// the kernel generators starting at column `offset`.
fn table_relations(table: &[Vec<usize>], offset: usize) -> Vec<Vec<i64>> {
    let m = table.len();
    let mut rels = Vec::new();
    let mut id = vec![0i64; offset + m];
    id[offset] = 1;
    rels.push(id);
    for a in 0..m {
        for b in 0..m {
            let mut row = vec![0i64; offset + m];
            row[offset + a] += 1;
            row[offset + b] += 1;
            row[offset + table[a][b]] -= 1;
            rels.push(row);
        }
    }
    rels
}

/// Greedy generating set of the kernel, smallest indices first.
fn minimal_kernel_generators(table: &[Vec<usize>]) -> Vec<usize> {
    let m = table.len();
    let mut span = vec![false; m];
    span[0] = true;
    let mut gens = Vec::new();
    for x in 1..m {
        if span[x] {
            continue;
        }
        gens.push(x);
        // closure of span ∪ {x}
        let mut changed = true;
        span[x] = true;
        while changed {
            changed = false;
            for a in 0..m {
                for b in 0..m {
                    if span[a] && span[b] && !span[table[a][b]] {
                        span[table[a][b]] = true;
                        changed = true;
                    }
                }
            }
        }
    }
    gens
}

impl AutPresentation {
    pub fn substitution(&self) -> &Substitution {
        self.reduction.original.substitution()
    }

    pub fn shift(&self) -> &Shift {
        &self.reduction.original
    }

    pub fn height(&self) -> usize {
        self.reduction.tower.h
    }

    /// `|Aut / ⟨σ⟩|`: kernel size times the number of fingerprints mod 1.
    pub fn quotient_order(&self) -> usize {
        let e = self.d.gcd(&(self.height() as u64));
        self.kernel.len() * (self.d / e) as usize
    }

    /// The generator `G`, or `σ^{-h}` when there is no root.
    pub fn root_or_shift(&self) -> BlockCode {
        self.root
            .clone()
            .unwrap_or_else(|| BlockCode::shift_power(self.shift(), -(self.height() as i64)))
    }

    /// Whether `code` (with a known fingerprint) is an automorphism of the
    /// original shift: it must equal `K ∘ G^a ∘ σ^b` for a kernel element
    /// `K`, `0 <= a < d` and the integer `b` matching the fingerprint.
    pub fn contains(&self, code: &BlockCode) -> Result<bool> {
        let shift = self.shift();
        let kappa = code
            .kappa()
            .ok_or_else(|| Error::Precondition("code has no fingerprint".into()))?;
        let g = self.root_or_shift();
        let step = g
            .kappa()
            .cloned()
            .ok_or_else(|| Error::Internal("generator without fingerprint".into()))?;
        for a in 0..self.d as i64 {
            let rest = kappa.sub(&step.mul_int(a));
            if !rest.is_integer() {
                continue;
            }
            let b: i64 = rest
                .num()
                .try_into()
                .map_err(|_| Error::Internal("shift exponent overflow".into()))?;
            let psi = g
                .power(a as usize, shift)?
                .compose(&BlockCode::shift_power(shift, b), shift)?;
            for k in &self.kernel {
                if k.compose(&psi, shift)?.equals(code, shift) {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

/// Everything `analyze` reports about one substitution.
#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub letters: usize,
    pub length: usize,
    pub primitive: bool,
    pub infiniteness: Option<Infiniteness>,
    pub height: Option<HeightReport>,
    pub pure_base: Option<String>,
    pub base_power: Option<u32>,
    pub injective: Option<bool>,
    pub injectivized: Option<String>,
    pub column_number: Option<usize>,
    pub shortest_forbidden: Option<usize>,
    pub periodic_points: Option<usize>,
    pub sigma_empty: Option<bool>,
    pub augment: Option<bool>,
    pub denominator_bound: Option<String>,
    pub one_sided: Option<OneSided>,
}

pub fn analyze(sub: &Substitution, limits: &Limits) -> Result<Analysis> {
    let mut a = Analysis {
        letters: sub.size(),
        length: sub.length(),
        primitive: sub.is_primitive(),
        infiniteness: None,
        height: None,
        pure_base: None,
        base_power: None,
        injective: None,
        injectivized: None,
        column_number: None,
        shortest_forbidden: None,
        periodic_points: None,
        sigma_empty: None,
        augment: None,
        denominator_bound: None,
        one_sided: None,
    };
    if !a.primitive {
        return Ok(a);
    }
    let inf = Shift::new(sub.clone()).infiniteness();
    let infinite = inf.infinite;
    a.infiniteness = Some(inf);
    if !infinite {
        return Ok(a);
    }
    let red = Reduction::new(sub, limits)?;
    a.height = Some(red.height.clone());
    a.pure_base = Some(red.tower.base.to_string());
    a.base_power = Some(red.tower.power);
    a.injective = Some(red.tower.base.is_injective());
    a.injectivized = Some(red.inj.target.to_string());
    let g = &red.graph;
    a.column_number = Some(g.c);
    a.shortest_forbidden = Some(g.j);
    a.periodic_points = Some(g.periodic_count);
    a.sigma_empty = Some(g.sigma_empty);
    a.augment = Some(g.augment);
    let r = BigInt::from(red.work.substitution().length());
    a.denominator_bound = Some((r.pow(g.j as u32) - 1u32).to_string());
    a.one_sided = Some(one_sided_aut(red.tower.h, g.c));
    Ok(a)
}
