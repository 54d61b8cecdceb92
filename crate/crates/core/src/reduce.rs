//! Height, pure base and injectivization, each with the conjugacy data needed
//! to move block codes back to the original shift.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_integer::Integer;
use serde::Serialize;

use crate::code::BlockCode;
use crate::language::Shift;
use crate::substitution::{Letter, Substitution, Word};
use crate::{Error, RAdic, Result};

/// Height of a substitution and the data it was computed from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightReport {
    pub h: usize,
    /// Lengths of the return words to `u_0` in the fixed point `u`.
    pub return_lengths: BTreeSet<usize>,
    /// `gcd` of the return lengths.
    pub gcd: usize,
    /// The fixed letter `u_0`.
    pub letter: Letter,
    /// Power `k` of `θ` for which `θ^k(u_0)` starts with `u_0`.
    pub power: u32,
}

fn strip_common_primes(mut g: usize, r: usize) -> usize {
    loop {
        let d = g.gcd(&r);
        if d == 1 {
            return g;
        }
        g /= d;
    }
}

fn iterate(sub: &Substitution, w: &[Letter], k: u32) -> Word {
    let mut w = w.to_vec();
    for _ in 0..k {
        w = sub.apply(&w);
    }
    w
}

/// Prefix of the one-sided fixed point of `θ^k` starting with `a`, of
/// length at least `len`.
fn fixed_prefix(sub: &Substitution, k: u32, a: Letter, len: usize) -> Word {
    let mut w = vec![a];
    while w.len() < len {
        w = iterate(sub, &w, k);
    }
    w
}

/// Splits `w` before every occurrence of `a`; `w` must start with `a`.
fn split_at_letter(w: &[Letter], a: Letter) -> Vec<&[Letter]> {
    let mut cuts: Vec<usize> = (0..w.len()).filter(|&i| w[i] == a).collect();
    cuts.push(w.len());
    cuts.windows(2).map(|c| &w[c[0]..c[1]]).collect()
}

/// Return words to `a` in the fixed point of `θ^k` beginning with `a`: the
/// first one, closed under "apply `θ^k` and cut at each `a`".
fn return_words(sub: &Substitution, k: u32, a: Letter) -> BTreeSet<Word> {
    let mut w = vec![a];
    while !w[1..].contains(&a) {
        w = iterate(sub, &w, k);
    }
    let second = 1 + w[1..].iter().position(|&x| x == a).unwrap();
    let first = w[..second].to_vec();
    let mut set = BTreeSet::from([first.clone()]);
    let mut queue = vec![first];
    while let Some(rw) = queue.pop() {
        let img = iterate(sub, &rw, k);
        for piece in split_at_letter(&img, a) {
            if !set.contains(piece) {
                set.insert(piece.to_vec());
                queue.push(piece.to_vec());
            }
        }
    }
    set
}

/// `h(θ)`: the largest divisor of `gcd{n : u_n = u_0}` coprime to `r`.
pub fn height(sub: &Substitution) -> HeightReport {
    let (power, letter) = sub.fixed_letter_power();
    let words = return_words(sub, power, letter);
    let return_lengths: BTreeSet<usize> = words.iter().map(Vec::len).collect();
    let gcd = return_lengths.iter().fold(0, |g, &l| g.gcd(&l));
    HeightReport {
        h: strip_common_primes(gcd, sub.length()),
        return_lengths,
        gcd,
        letter,
        power,
    }
}

/// The original shift presented as a height-`h` tower over a pure base.
///
/// Base letters are the `h`-blocks of the fixed point `u` read at positions
/// `≡ 0 (mod h)`; the base rule of a block `B` is `θ^k(B)` cut into aligned
/// `h`-blocks. A point of the original shift whose coordinate 0 starts an
/// aligned block has phase 0; `σ^j` of such a point has phase `j`, so the
/// letter at coordinate `i` sits at offset `phase + i mod h` inside its block.
#[derive(Clone, Debug)]
pub struct TowerConjugacy {
    pub h: usize,
    pub base: Substitution,
    /// `blocks[b]` is the original word of base letter `b`.
    pub blocks: Vec<Word>,
    /// Power of `θ` the base is induced from.
    pub power: u32,
    orig_size: usize,
    index: HashMap<Word, Letter>,
    phase_radius: usize,
    phase: BTreeMap<Word, usize>,
}

impl TowerConjugacy {
    fn trivial(sub: &Substitution) -> Self {
        let blocks: Vec<Word> = (0..sub.size()).map(|a| vec![a]).collect();
        let index = blocks.iter().cloned().zip(0..).collect();
        let phase = (0..sub.size()).map(|a| (vec![a], 0)).collect();
        TowerConjugacy {
            h: 1,
            base: sub.clone(),
            blocks,
            power: 1,
            orig_size: sub.size(),
            index,
            phase_radius: 0,
            phase,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.h == 1
    }

    /// Base letters of an aligned word (length a multiple of `h`).
    pub fn encode(&self, w: &[Letter]) -> Result<Word> {
        if !w.len().is_multiple_of(self.h) {
            return Err(Error::Precondition(format!(
                "length {} is not a multiple of the height {}",
                w.len(),
                self.h
            )));
        }
        w.chunks(self.h)
            .map(|b| {
                self.index
                    .get(b)
                    .copied()
                    .ok_or_else(|| Error::InadmissibleWindow(format!("{b:?} is not an aligned block")))
            })
            .collect()
    }

    pub fn decode(&self, w: &[Letter]) -> Word {
        w.iter().flat_map(|&b| self.blocks[b].iter().copied()).collect()
    }

    /// Radius of the window that determines the phase of its centre.
    pub fn phase_radius(&self) -> usize {
        self.phase_radius
    }

    /// Offset inside its aligned block of the centre of a window of width
    /// `2·phase_radius + 1`.
    pub fn phase_of(&self, window: &[Letter]) -> Option<usize> {
        self.phase.get(window).copied()
    }

    /// Lifts `Ψ: X_base → X_other_base` to the map `Ψ_0` between the towers
    /// that keeps phases: on phase-0 points it is `decode ∘ Ψ ∘ encode`.
    /// `src` is the original shift under `self`; the fingerprint becomes
    /// `h·κ(Ψ)` in units of the original shift.
    pub fn lift_to(&self, dst: &TowerConjugacy, code: &BlockCode, src: &Shift) -> Result<BlockCode> {
        if self.h != dst.h {
            return Err(Error::Precondition("towers of different heights".into()));
        }
        let h = self.h;
        if h == 1 {
            let mut c = BlockCode::from_table(
                code.left(),
                code.right(),
                code.table().clone(),
                src.substitution().size(),
                dst.orig_size,
            );
            if let Some(k) = code.kappa() {
                c = c.with_kappa(k.clone());
            }
            return Ok(c.minimized(src));
        }
        let (l, r) = (code.left(), code.right());
        let rho = self.phase_radius;
        let left = rho.max(h - 1 + l * h);
        let right = rho.max((r + 1) * h - 1);
        let mut table = BTreeMap::new();
        for w in src.words(left + right + 1).iter() {
            let p = self
                .phase_of(&w[left - rho..=left + rho])
                .ok_or_else(|| Error::Internal("phase window missing".into()))?;
            let start = left - p - l * h;
            let blocks = self.encode(&w[start..start + (l + r + 1) * h])?;
            let out = code
                .eval(&blocks)
                .ok_or_else(|| Error::InadmissibleWindow(format!("{blocks:?}")))?;
            table.insert(w.clone(), dst.blocks[out][p]);
        }
        let mut lifted =
            BlockCode::from_table(left, right, table, src.substitution().size(), dst.orig_size);
        if let Some(k) = code.kappa() {
            lifted = lifted.with_kappa(k.mul_int(h as i64));
        }
        Ok(lifted.minimized(src))
    }

    /// [`lift_to`](Self::lift_to) for automorphisms of a single tower.
    pub fn lift(&self, code: &BlockCode, src: &Shift) -> Result<BlockCode> {
        self.lift_to(self, code, src)
    }
}

fn block_name(sub: &Substitution, b: &[Letter]) -> String {
    let sep = if b.iter().any(|&a| sub.name(a).chars().count() != 1) { "_" } else { "" };
    b.iter().map(|&a| sub.name(a)).collect::<Vec<_>>().join(sep)
}

/// The pure base of `sub` as a tower; trivial when the height is 1.
pub fn pure_base(sub: &Substitution) -> Result<TowerConjugacy> {
    let hr = height(sub);
    if hr.h == 1 {
        return Ok(TowerConjugacy::trivial(sub));
    }
    let h = hr.h;
    let (k, a) = (hr.power, hr.letter);
    let u = fixed_prefix(sub, k, a, h);
    let mut blocks: Vec<Word> = vec![u[..h].to_vec()];
    let mut index: HashMap<Word, Letter> = HashMap::from([(blocks[0].clone(), 0)]);
    let mut rules: Vec<Word> = Vec::new();
    let mut next = 0;
    while next < blocks.len() {
        let img = iterate(sub, &blocks[next], k);
        let mut rule = Vec::with_capacity(img.len() / h);
        for chunk in img.chunks(h) {
            let id = match index.get(chunk) {
                Some(&id) => id,
                None => {
                    blocks.push(chunk.to_vec());
                    index.insert(chunk.to_vec(), blocks.len() - 1);
                    blocks.len() - 1
                }
            };
            rule.push(id);
        }
        rules.push(rule);
        next += 1;
    }
    let mut names: Vec<String> = blocks.iter().map(|b| block_name(sub, b)).collect();
    let mut seen = BTreeSet::new();
    for (i, n) in names.iter_mut().enumerate() {
        if !seen.insert(n.clone()) {
            *n = format!("{n}_{i}");
        }
    }
    let base = Substitution::new(names, rules)?;
    if !base.is_primitive() {
        return Err(Error::Internal("pure base is not primitive".into()));
    }
    let recheck = height(&base);
    if recheck.h != 1 {
        return Err(Error::Internal(format!(
            "pure base has height {} instead of 1",
            recheck.h
        )));
    }
    let base_shift = Shift::new(base.clone());
    let orig = Shift::new(sub.clone());
    let (phase_radius, phase) = phase_table(&orig, &base_shift, &blocks, h)?;
    Ok(TowerConjugacy {
        h,
        base,
        blocks,
        power: k,
        orig_size: sub.size(),
        index,
        phase_radius,
        phase,
    })
}

/// Smallest `ρ` such that every admissible `(2ρ+1)`-window fixes the block
/// offset of its centre.
fn phase_table(
    orig: &Shift,
    base: &Shift,
    blocks: &[Word],
    h: usize,
) -> Result<(usize, BTreeMap<Word, usize>)> {
    let cap = 64 * h;
    for rho in 0..=cap {
        let width = 2 * rho + 1;
        let n = (width + 2 * h - 2) / h + 1;
        let mut table: BTreeMap<Word, usize> = BTreeMap::new();
        let mut ok = true;
        'outer: for bw in base.words(n).iter() {
            let w: Word = bw.iter().flat_map(|&b| blocks[b].iter().copied()).collect();
            for s in 0..=w.len() - width {
                let p = (s + rho) % h;
                if let Some(q) = table.insert(w[s..s + width].to_vec(), p) {
                    if q != p {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        if ok {
            if table.len() != orig.words(width).len() {
                return Err(Error::Internal("aligned blocks miss some windows".into()));
            }
            return Ok((rho, table));
        }
    }
    Err(Error::ResourceLimit {
        what: "phase recognition radius",
        cap: cap as u64,
    })
}

/// An injective substitution conjugate to the input, with both directions.
#[derive(Clone, Debug)]
pub struct Injectivization {
    pub target: Substitution,
    /// `merge[a]` is the target letter of original letter `a`.
    pub merge: Vec<Letter>,
    /// Radius-0 code from the original shift to the target shift.
    pub forward: BlockCode,
    /// Its inverse, found by radius search.
    pub inverse: BlockCode,
}

impl Injectivization {
    pub fn is_trivial(&self) -> bool {
        self.merge.iter().enumerate().all(|(a, &b)| a == b) && self.merge.len() == self.target.size()
    }

    /// `inverse ∘ code ∘ forward`: moves an automorphism of the target back
    /// to the original shift.
    pub fn pull_back(&self, code: &BlockCode, src: &Shift) -> Result<BlockCode> {
        let inner = code.compose(&self.forward, src)?;
        Ok(self.inverse.compose(&inner, src)?.minimized(src))
    }
}

/// Merges letters with equal images until the substitution is injective.
pub fn injectivize(sub: &Substitution, max_radius: usize) -> Result<Injectivization> {
    if !sub.is_primitive() {
        return Err(Error::Precondition("substitution is not primitive".into()));
    }
    let mut cur = sub.clone();
    let mut merge: Vec<Letter> = (0..sub.size()).collect();
    while !cur.is_injective() {
        let mut rep_of: BTreeMap<&[Letter], Letter> = BTreeMap::new();
        let mut step = vec![0; cur.size()];
        let mut reps = Vec::new();
        for a in 0..cur.size() {
            let img = cur.image(a);
            step[a] = *rep_of.entry(img).or_insert_with(|| {
                reps.push(a);
                reps.len() - 1
            });
        }
        let names = reps.iter().map(|&a| cur.name(a).to_owned()).collect();
        let rules = reps
            .iter()
            .map(|&a| cur.image(a).iter().map(|&b| step[b]).collect())
            .collect();
        cur = Substitution::new(names, rules)?;
        for m in merge.iter_mut() {
            *m = step[*m];
        }
    }
    if cur.size() < 2 {
        return Err(Error::Precondition("the shift is a single fixed point".into()));
    }
    let src = Shift::new(sub.clone());
    let dst = Shift::new(cur.clone());
    let base = sub.length() as u64;
    let forward = BlockCode::letter_map(&src, &merge, cur.size()).with_kappa(RAdic::zero(base));
    let inverse = forward.invert(&src, &dst, max_radius)?;
    Ok(Injectivization {
        target: cur,
        merge,
        forward,
        inverse,
    })
}
