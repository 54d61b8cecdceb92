//! Languages `𝓛_n(X_θ)` and the complexity-plateau infiniteness scan.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, RwLock};

use crate::substitution::{Letter, Substitution, Word};

pub type WordSet = BTreeSet<Word>;

/// A substitution together with a write-once cache of its languages.
///
/// `L_1` and the closed `L_2` are computed on construction; longer levels are
/// filled on demand and never change afterwards, so a `Shift` can be shared
/// between threads.
#[derive(Debug)]
pub struct Shift {
    sub: Substitution,
    levels: RwLock<BTreeMap<usize, Arc<WordSet>>>,
}

impl Clone for Shift {
    fn clone(&self) -> Self {
        Shift {
            sub: self.sub.clone(),
            levels: RwLock::new(self.levels.read().unwrap().clone()),
        }
    }
}

impl Shift {
    /// Builds the cache. The substitution is assumed primitive; for a
    /// non-primitive one the result is the language generated from all letters.
    pub fn new(sub: Substitution) -> Self {
        let l1: WordSet = (0..sub.size()).map(|a| vec![a]).collect();
        let l2 = two_word_closure(&sub);
        Shift {
            sub,
            levels: RwLock::new(BTreeMap::from([(1, Arc::new(l1)), (2, Arc::new(l2))])),
        }
    }

    pub fn substitution(&self) -> &Substitution {
        &self.sub
    }

    /// `L_n(X_θ)`, for `n >= 1`.
    pub fn words(&self, n: usize) -> Arc<WordSet> {
        assert!(n >= 1, "language level starts at 1");
        let l2 = {
            let levels = self.levels.read().unwrap();
            if let Some(l) = levels.get(&n) {
                return Arc::clone(l);
            }
            Arc::clone(&levels[&2])
        };
        let set = Arc::new(level(&self.sub, &l2, n));
        let mut levels = self.levels.write().unwrap();
        Arc::clone(levels.entry(n).or_insert(set))
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        w.is_empty() || self.words(w.len()).contains(w)
    }

    /// Complexity `p(n) = |L_n|`.
    pub fn complexity(&self, n: usize) -> usize {
        self.words(n).len()
    }

    /// Scans for a complexity plateau `p(n+1) = p(n)` with `n <= |𝒜|²·r`.
    pub fn infiniteness(&self) -> Infiniteness {
        let bound = self.sub.size() * self.sub.size() * self.sub.length();
        let mut prev = self.complexity(1);
        for n in 1..=bound {
            let next = self.complexity(n + 1);
            if next == prev {
                return Infiniteness {
                    infinite: false,
                    plateau_at: Some(n),
                    scanned_to: n,
                    warning: None,
                };
            }
            prev = next;
        }
        Infiniteness {
            infinite: true,
            plateau_at: None,
            scanned_to: bound,
            warning: Some(format!(
                "no complexity plateau found for n <= {bound}; infiniteness is assumed, not certified"
            )),
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.infiniteness().infinite
    }
}

/// Outcome of the plateau scan.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Infiniteness {
    pub infinite: bool,
    pub plateau_at: Option<usize>,
    pub scanned_to: usize,
    pub warning: Option<String>,
}

/// All n-subwords of `θ^m(w)` for `w ∈ L_2`, with `r^m >= n + 1`.
fn level(sub: &Substitution, l2: &WordSet, n: usize) -> WordSet {
    let r = sub.length();
    let mut m = 0u32;
    let mut rm = 1usize;
    while rm < n + 1 {
        rm *= r;
        m += 1;
    }
    let mut out = WordSet::new();
    for w in l2 {
        let img = sub.apply_power(w, m, usize::MAX).expect("uncapped power");
        for win in img.windows(n) {
            if !out.contains(win) {
                out.insert(win.to_vec());
            }
        }
    }
    out
}

/// Closure of the 2-words under "apply θ and read interior and boundary
/// 2-subwords", seeded with the 2-subwords of every `θ(a)`.
fn two_word_closure(sub: &Substitution) -> WordSet {
    let mut set = WordSet::new();
    let mut queue: Vec<Word> = Vec::new();
    for a in 0..sub.size() {
        for win in sub.image(a).windows(2) {
            if set.insert(win.to_vec()) {
                queue.push(win.to_vec());
            }
        }
    }
    while let Some(w) = queue.pop() {
        let img = sub.apply(&w);
        for win in img.windows(2) {
            if set.insert(win.to_vec()) {
                queue.push(win.to_vec());
            }
        }
    }
    set
}

/// `L_n` for a substitution, see [`Shift::words`].
pub fn language(sub: &Substitution, n: usize) -> WordSet {
    (*Shift::new(sub.clone()).words(n)).clone()
}

pub fn is_infinite(sub: &Substitution) -> bool {
    Shift::new(sub.clone()).is_infinite()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(sub: &Substitution, set: &WordSet) -> Vec<String> {
        set.iter().map(|w| sub.format_word(w)).collect()
    }

    /// n-subwords of θ^m(a) over all letters, with r^m >= n·r².
    fn brute_force(sub: &Substitution, n: usize) -> WordSet {
        let r = sub.length();
        let mut m = 0;
        while r.pow(m) < n * r * r {
            m += 1;
        }
        let mut out = WordSet::new();
        for a in 0..sub.size() {
            let w = sub.power_word(a, m, usize::MAX).unwrap();
            for win in w.windows(n) {
                out.insert(win.to_vec());
            }
        }
        out
    }

    #[test]
    fn thue_morse_three_words() {
        let tm = Substitution::parse("0->01\n1->10").unwrap();
        let sh = Shift::new(tm.clone());
        assert_eq!(
            words(&tm, &sh.words(3)),
            vec!["001", "010", "011", "100", "101", "110"]
        );
        assert_eq!(words(&tm, &sh.words(1)), vec!["0", "1"]);
    }

    #[test]
    fn coincidence_example_two_words() {
        let s = Substitution::parse("a->abbc\nb->cbab\nc->cbba").unwrap();
        let l2 = language(&s, 2);
        for w in ["ab", "bb", "bc", "cc", "cb", "ba"] {
            let w: Word = w.chars().map(|c| s.letter(&c.to_string()).unwrap()).collect();
            assert!(l2.contains(&w));
        }
    }

    #[test]
    fn matches_brute_force() {
        for text in [
            "0->01\n1->10",
            "a->abbc\nb->cbab\nc->cbba",
            "a->aba\nb->cba\nc->ccb",
            "a->ab\nb->aa",
        ] {
            let s = Substitution::parse(text).unwrap();
            let sh = Shift::new(s.clone());
            for n in 1..=8 {
                assert_eq!(*sh.words(n), brute_force(&s, n), "{text} n={n}");
            }
        }
    }

    #[test]
    fn infiniteness_scan() {
        let tm = Substitution::parse("0->01\n1->10").unwrap();
        let sh = Shift::new(tm);
        assert_eq!(sh.complexity(1), 2);
        assert_eq!(sh.complexity(2), 4);
        assert_eq!(sh.complexity(3), 6);
        assert!(sh.is_infinite());
        let per = Substitution::parse("a->ab\nb->ab").unwrap();
        let inf = Shift::new(per).infiniteness();
        assert!(!inf.infinite);
        assert_eq!(inf.plateau_at, Some(1));
        assert!(is_infinite(&Substitution::parse("a->aba\nb->cba\nc->ccb").unwrap()));
    }

    #[test]
    fn prefix_suffix_closed() {
        let s = Substitution::parse("a->aba\nb->cba\nc->ccb").unwrap();
        let sh = Shift::new(s);
        for n in 1..7 {
            let lo = sh.words(n);
            for w in sh.words(n + 1).iter() {
                assert!(lo.contains(&w[..n]) && lo.contains(&w[1..]));
            }
            assert!(sh.complexity(n + 1) > sh.complexity(n));
        }
    }
}
