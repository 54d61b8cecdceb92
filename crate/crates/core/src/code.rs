//! Sliding block codes restricted to the language of a substitution shift.

use std::collections::{BTreeMap, HashMap};

use crate::language::Shift;
use crate::substitution::{Letter, Word};
use crate::{Error, RAdic, Result};

/// A sliding block code `Φ(x)_i = f(x_{i-left} … x_{i+right})`.
///
/// The local rule is only stored on windows of the source language; values off
/// the language never influence the induced map. `kappa` is the odometer
/// fingerprint of the map when it is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCode {
    left: usize,
    right: usize,
    table: BTreeMap<Word, Letter>,
    kappa: Option<RAdic>,
    source_size: usize,
    target_size: usize,
}

impl BlockCode {
    /// Tabulates `rule` on every admissible window of width `left + right + 1`.
    pub fn from_fn(
        src: &Shift,
        left: usize,
        right: usize,
        target_size: usize,
        mut rule: impl FnMut(&[Letter]) -> Letter,
    ) -> Self {
        let table = src
            .words(left + right + 1)
            .iter()
            .map(|w| (w.clone(), rule(w)))
            .collect();
        BlockCode {
            left,
            right,
            table,
            kappa: None,
            source_size: src.substitution().size(),
            target_size,
        }
    }

    pub fn from_table(
        left: usize,
        right: usize,
        table: BTreeMap<Word, Letter>,
        source_size: usize,
        target_size: usize,
    ) -> Self {
        debug_assert!(table.keys().all(|w| w.len() == left + right + 1));
        BlockCode {
            left,
            right,
            table,
            kappa: None,
            source_size,
            target_size,
        }
    }

    pub fn identity(src: &Shift) -> Self {
        let n = src.substitution().size();
        let base = src.substitution().length() as u64;
        Self::from_fn(src, 0, 0, n, |w| w[0]).with_kappa(RAdic::zero(base))
    }

    /// `σ^m`: `(σ^m x)_i = x_{i+m}`, with fingerprint `m`.
    pub fn shift_power(src: &Shift, m: i64) -> Self {
        let n = src.substitution().size();
        let base = src.substitution().length() as u64;
        let code = if m >= 0 {
            let m = m as usize;
            Self::from_fn(src, 0, m, n, |w| w[m])
        } else {
            Self::from_fn(src, m.unsigned_abs() as usize, 0, n, |w| w[0])
        };
        code.with_kappa(RAdic::integer(m, base))
    }

    /// Radius-0 code sending letter `a` to `map[a]`.
    pub fn letter_map(src: &Shift, map: &[Letter], target_size: usize) -> Self {
        Self::from_fn(src, 0, 0, target_size, |w| map[w[0]])
    }

    pub fn with_kappa(mut self, kappa: RAdic) -> Self {
        self.kappa = Some(kappa);
        self
    }

    pub fn without_kappa(mut self) -> Self {
        self.kappa = None;
        self
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn width(&self) -> usize {
        self.left + self.right + 1
    }

    pub fn kappa(&self) -> Option<&RAdic> {
        self.kappa.as_ref()
    }

    pub fn table(&self) -> &BTreeMap<Word, Letter> {
        &self.table
    }

    pub fn source_size(&self) -> usize {
        self.source_size
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    /// Image of one window of width [`width`](Self::width).
    pub fn eval(&self, window: &[Letter]) -> Option<Letter> {
        self.table.get(window).copied()
    }

    /// Slides the local rule over `w`, producing `|w| - left - right` letters.
    pub fn apply(&self, w: &[Letter]) -> Result<Word> {
        if w.len() < self.width() {
            return Err(Error::Precondition(format!(
                "word of length {} is shorter than the code window {}",
                w.len(),
                self.width()
            )));
        }
        w.windows(self.width())
            .map(|win| {
                self.eval(win)
                    .ok_or_else(|| Error::InadmissibleWindow(format!("{win:?}")))
            })
            .collect()
    }

    /// `self ∘ inner`, tabulated on the language of `src` (the source of `inner`).
    pub fn compose(&self, inner: &BlockCode, src: &Shift) -> Result<BlockCode> {
        if inner.target_size != self.source_size {
            return Err(Error::AlphabetMismatch(format!(
                "inner code maps into {} letters, outer code reads {}",
                inner.target_size, self.source_size
            )));
        }
        if inner.source_size != src.substitution().size() {
            return Err(Error::AlphabetMismatch("inner code does not read src".into()));
        }
        let left = self.left + inner.left;
        let right = self.right + inner.right;
        let mut table = BTreeMap::new();
        for w in src.words(left + right + 1).iter() {
            let mid = inner.apply(w)?;
            let out = self.apply(&mid)?;
            table.insert(w.clone(), out[0]);
        }
        let kappa = match (&self.kappa, &inner.kappa) {
            (Some(a), Some(b)) => Some(a.add(b)),
            _ => None,
        };
        Ok(BlockCode {
            left,
            right,
            table,
            kappa,
            source_size: inner.source_size,
            target_size: self.target_size,
        })
    }

    /// `self^n` for an endomorphism, `n >= 0`.
    pub fn power(&self, n: usize, src: &Shift) -> Result<BlockCode> {
        let mut acc = BlockCode::identity(src);
        if self.kappa.is_none() {
            acc = acc.without_kappa();
        }
        // Square-and-multiply keeps the number of compositions logarithmic.
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = base.compose(&acc, src)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.compose(&base, src)?;
            }
        }
        Ok(acc)
    }

    /// The same map with a wider window.
    pub fn padded(&self, left: usize, right: usize, src: &Shift) -> BlockCode {
        assert!(left >= self.left && right >= self.right);
        let off = left - self.left;
        let w = self.width();
        let mut code = BlockCode::from_fn(src, left, right, self.target_size, |win| {
            self.eval(&win[off..off + w]).expect("sub-window of an admissible window")
        });
        code.kappa = self.kappa.clone();
        code
    }

    /// True when both codes induce the same map on the shift of `src`: every
    /// admissible window of the common width gets the same image.
    pub fn equals(&self, other: &BlockCode, src: &Shift) -> bool {
        if self.source_size != other.source_size || self.target_size != other.target_size {
            return false;
        }
        let left = self.left.max(other.left);
        let right = self.right.max(other.right);
        let (o1, o2) = (left - self.left, left - other.left);
        src.words(left + right + 1).iter().all(|w| {
            self.eval(&w[o1..o1 + self.width()]) == other.eval(&w[o2..o2 + other.width()])
        })
    }

    /// Shrinks the window as far as the induced map allows, left side first.
    pub fn minimized(&self, src: &Shift) -> BlockCode {
        let mut code = self.clone();
        loop {
            if code.left > 0 {
                if let Some(c) = code.trim(1, 0) {
                    code = c;
                    continue;
                }
            }
            if code.right > 0 {
                if let Some(c) = code.trim(0, 1) {
                    code = c;
                    continue;
                }
            }
            break;
        }
        debug_assert!(code.equals(self, src));
        code
    }

    fn trim(&self, dl: usize, dr: usize) -> Option<BlockCode> {
        let w = self.width() - dl - dr;
        let mut table: BTreeMap<Word, Letter> = BTreeMap::new();
        for (win, &v) in &self.table {
            let key = win[dl..dl + w].to_vec();
            match table.get(&key) {
                Some(&u) if u != v => return None,
                _ => {
                    table.insert(key, v);
                }
            }
        }
        Some(BlockCode {
            left: self.left - dl,
            right: self.right - dr,
            table,
            kappa: self.kappa.clone(),
            source_size: self.source_size,
            target_size: self.target_size,
        })
    }

    /// Searches radii `R = 0, 1, …, max_radius` for a code `Ψ: dst → src` with
    /// `Ψ ∘ self = id`: every admissible image window of width `2R + 1`
    /// must determine the source letter under its centre. Fails if the map is
    /// not onto `dst` or no radius up to the cap works.
    pub fn invert(&self, src: &Shift, dst: &Shift, max_radius: usize) -> Result<BlockCode> {
        for radius in 0..=max_radius {
            let span = 2 * radius + 1;
            let mut table: HashMap<Word, Letter> = HashMap::new();
            let mut ok = true;
            for w in src.words(span + self.left + self.right).iter() {
                let img = self.apply(w)?;
                let centre = w[radius + self.left];
                match table.insert(img, centre) {
                    Some(prev) if prev != centre => {
                        ok = false;
                        break;
                    }
                    _ => {}
                }
            }
            if !ok {
                continue;
            }
            let targets = dst.words(span);
            if targets.len() != table.len() || !targets.iter().all(|w| table.contains_key(w)) {
                return Err(Error::Precondition(
                    "code is not onto the target language; no inverse exists".into(),
                ));
            }
            let table: BTreeMap<Word, Letter> = table.into_iter().collect();
            let mut inv = BlockCode::from_table(
                radius,
                radius,
                table,
                self.target_size,
                self.source_size,
            );
            inv.kappa = self.kappa.as_ref().map(RAdic::neg);
            return Ok(inv.minimized(dst));
        }
        Err(Error::ResourceLimit {
            what: "inverse block code radius",
            cap: max_radius as u64,
        })
    }

    /// Human-readable table, one `window -> letter` per line.
    pub fn describe(
        &self,
        src: &crate::Substitution,
        dst: &crate::Substitution,
    ) -> Vec<(String, String)> {
        self.table
            .iter()
            .map(|(w, &v)| (src.format_word(w), dst.name(v).to_owned()))
            .collect()
    }
}
