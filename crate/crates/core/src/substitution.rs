//! Constant-length substitutions: parsing, powers and the incidence-matrix
//! primitivity test.

use std::collections::HashMap;
use std::fmt;

use crate::{Error, Result};

/// Index of a symbol in the canonical (declaration) order of an alphabet.
pub type Letter = usize;
/// A finite word over letter indices.
pub type Word = Vec<Letter>;

/// A substitution `θ` on a finite alphabet where every image has length `r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Substitution {
    names: Vec<String>,
    rules: Vec<Word>,
    len: usize,
}

impl Substitution {
    /// Builds a substitution from symbol names and images given as letter
    /// indices. Rules must all share one length `r >= 2`.
    pub fn new(names: Vec<String>, rules: Vec<Word>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Invalid("empty alphabet".into()));
        }
        if rules.len() != names.len() {
            return Err(Error::Invalid(format!(
                "{} symbols but {} rules",
                names.len(),
                rules.len()
            )));
        }
        let len = rules[0].len();
        if len < 2 {
            return Err(Error::Invalid("images must have length at least 2".into()));
        }
        for (a, w) in rules.iter().enumerate() {
            if w.len() != len {
                return Err(Error::Invalid(format!(
                    "unequal rule lengths: {} has length {}, expected {}",
                    names[a],
                    w.len(),
                    len
                )));
            }
            if let Some(&b) = w.iter().find(|&&b| b >= names.len()) {
                return Err(Error::Invalid(format!("unknown letter index {b}")));
            }
        }
        let mut seen = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if seen.insert(n.as_str(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate symbol {n}")));
            }
        }
        Ok(Substitution { names, rules, len })
    }

    /// Convenience constructor for single-character alphabets, e.g.
    /// `from_rules(&[("a", "aba"), ("b", "cba"), ("c", "ccb")])`.
    pub fn from_rules(rules: &[(&str, &str)]) -> Result<Self> {
        let text: String = rules
            .iter()
            .map(|(a, w)| format!("{a} -> {w}\n"))
            .collect();
        Self::parse(&text)
    }

    /// Parses the substitution text format.
    ///
    /// ```text
    /// # comment
    /// alphabet: a b c      (optional; enables multi-character tokens)
    /// a -> abbc
    /// b -> cbab
    /// ```
    ///
    /// Without an `alphabet:` line symbols are single characters and the
    /// alphabet order is the order in which rules appear.
    pub fn parse(text: &str) -> Result<Self> {
        let mut declared: Option<Vec<String>> = None;
        let mut raw: Vec<(usize, String, Vec<String>)> = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = match line.find('#') {
                Some(p) => &line[..p],
                None => line,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("alphabet:") {
                if declared.is_some() {
                    return Err(parse_err(lineno, "duplicate alphabet line"));
                }
                if !raw.is_empty() {
                    return Err(parse_err(lineno, "alphabet line must precede the rules"));
                }
                let toks: Vec<String> = rest.split_whitespace().map(str::to_owned).collect();
                if toks.is_empty() {
                    return Err(parse_err(lineno, "empty alphabet"));
                }
                declared = Some(toks);
                continue;
            }
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| parse_err(lineno, "expected `symbol -> image`"))?;
            let lhs = lhs.trim();
            let rhs = rhs.trim();
            if lhs.is_empty() || lhs.split_whitespace().count() != 1 {
                return Err(parse_err(lineno, "rule must name exactly one symbol"));
            }
            let image: Vec<String> = if declared.is_some() {
                rhs.split_whitespace().map(str::to_owned).collect()
            } else {
                if lhs.chars().count() != 1 {
                    return Err(parse_err(
                        lineno,
                        "multi-character symbol requires an `alphabet:` line",
                    ));
                }
                rhs.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(String::from)
                    .collect()
            };
            if image.is_empty() {
                return Err(parse_err(lineno, "empty image"));
            }
            raw.push((lineno, lhs.to_owned(), image));
        }

        let names: Vec<String> = match &declared {
            Some(d) => d.clone(),
            None => {
                let mut seen = Vec::new();
                for (_, s, _) in &raw {
                    if !seen.contains(s) {
                        seen.push(s.clone());
                    }
                }
                seen
            }
        };
        if names.is_empty() {
            return Err(parse_err(1, "empty alphabet"));
        }
        let mut index: HashMap<&str, Letter> = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.as_str(), i).is_some() {
                return Err(parse_err(1, &format!("symbol {n} declared twice")));
            }
        }
        let mut rules: Vec<Option<Word>> = vec![None; names.len()];
        let len = raw.first().map(|(_, _, w)| w.len()).unwrap_or(0);
        for (lineno, lhs, image) in &raw {
            let a = *index
                .get(lhs.as_str())
                .ok_or_else(|| parse_err(*lineno, &format!("unknown symbol {lhs}")))?;
            if rules[a].is_some() {
                return Err(parse_err(*lineno, &format!("duplicate rule for {lhs}")));
            }
            if image.len() != len {
                return Err(parse_err(
                    *lineno,
                    &format!(
                        "unequal rule lengths: image of {lhs} has length {}, expected {len}",
                        image.len()
                    ),
                ));
            }
            let mut w = Vec::with_capacity(image.len());
            for s in image {
                let b = *index
                    .get(s.as_str())
                    .ok_or_else(|| parse_err(*lineno, &format!("unknown symbol {s} in image")))?;
                w.push(b);
            }
            rules[a] = Some(w);
        }
        let rules: Vec<Word> = rules
            .into_iter()
            .enumerate()
            .map(|(a, w)| w.ok_or_else(|| parse_err(1, &format!("no rule for {}", names[a]))))
            .collect::<Result<_>>()?;
        if len < 2 {
            return Err(parse_err(raw[0].0, "images must have length at least 2"));
        }
        Substitution::new(names, rules)
    }

    /// Serializes back to the text format; round-trips through [`parse`](Self::parse).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.multi_char() {
            out.push_str("alphabet: ");
            out.push_str(&self.names.join(" "));
            out.push('\n');
        }
        for a in 0..self.size() {
            out.push_str(&format!("{} -> {}\n", self.names[a], self.format_word(&self.rules[a])));
        }
        out
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: Letter) -> &str {
        &self.names[a]
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.names.iter().position(|n| n == name)
    }

    /// Alphabet size `|𝒜|`.
    pub fn size(&self) -> usize {
        self.names.len()
    }

    /// Common image length `r`.
    pub fn length(&self) -> usize {
        self.len
    }

    pub fn image(&self, a: Letter) -> &[Letter] {
        &self.rules[a]
    }

    pub fn rules(&self) -> &[Word] {
        &self.rules
    }

    /// Column map `θ_i`: letter `a` goes to the `(i+1)`-st letter of `θ(a)`.
    pub fn column(&self, i: usize) -> Vec<Letter> {
        self.rules.iter().map(|w| w[i]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Letter>> {
        (0..self.len).map(|i| self.column(i)).collect()
    }

    /// Applies `θ` letter by letter.
    pub fn apply(&self, word: &[Letter]) -> Word {
        let mut out = Vec::with_capacity(word.len() * self.len);
        for &a in word {
            out.extend_from_slice(&self.rules[a]);
        }
        out
    }

    /// `θ^m(word)`, refusing to build words longer than `cap`.
    pub fn apply_power(&self, word: &[Letter], m: u32, cap: usize) -> Result<Word> {
        let total = (self.len as u128)
            .checked_pow(m)
            .and_then(|p| p.checked_mul(word.len() as u128));
        match total {
            Some(t) if t <= cap as u128 => {}
            _ => {
                return Err(Error::ResourceLimit {
                    what: "substitution power word length",
                    cap: cap as u64,
                })
            }
        }
        let mut w = word.to_vec();
        for _ in 0..m {
            w = self.apply(&w);
        }
        Ok(w)
    }

    /// `θ^m(a)`, a word of length `r^m`.
    pub fn power_word(&self, a: Letter, m: u32, cap: usize) -> Result<Word> {
        self.apply_power(&[a], m, cap)
    }

    /// The substitution `θ^k` (length `r^k`) on the same alphabet.
    pub fn power(&self, k: u32, cap: usize) -> Result<Substitution> {
        if k == 0 {
            return Err(Error::Precondition("power must be positive".into()));
        }
        let rules = (0..self.size())
            .map(|a| self.power_word(a, k, cap))
            .collect::<Result<Vec<_>>>()?;
        Ok(Substitution {
            names: self.names.clone(),
            rules,
            len: self.len.pow(k),
        })
    }

    /// Same rules, new symbol names.
    pub fn relabelled(&self, names: Vec<String>) -> Result<Substitution> {
        Substitution::new(names, self.rules.clone())
    }

    /// True when the images are pairwise distinct.
    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.rules.iter().all(|w| seen.insert(w))
    }

    /// True when some power `k <= (|𝒜|-1)^2 + 1` of the incidence matrix is
    /// entrywise positive.
    pub fn is_primitive(&self) -> bool {
        let n = self.size();
        let mut base = vec![vec![false; n]; n];
        for (a, w) in self.rules.iter().enumerate() {
            for &b in w {
                base[a][b] = true;
            }
        }
        let bound = (n - 1) * (n - 1) + 1;
        let mut cur = base.clone();
        for _ in 0..bound {
            if cur.iter().all(|row| row.iter().all(|&x| x)) {
                return true;
            }
            let mut next = vec![vec![false; n]; n];
            for i in 0..n {
                for k in 0..n {
                    if cur[i][k] {
                        for j in 0..n {
                            next[i][j] |= base[k][j];
                        }
                    }
                }
            }
            cur = next;
        }
        false
    }

    /// A letter `a` with `θ(a)` starting with `a`, if any.
    pub fn fixed_first_letter(&self) -> Option<Letter> {
        (0..self.size()).find(|&a| self.rules[a][0] == a)
    }

    /// Smallest `k >= 1` such that `θ^k` has a letter whose image starts with
    /// itself, with that letter. Always exists with `k <= |𝒜|`.
    pub fn fixed_letter_power(&self) -> (u32, Letter) {
        let first = self.column(0);
        let mut best: Option<(u32, Letter)> = None;
        for start in 0..self.size() {
            let mut a = first[start];
            for k in 1..=self.size() as u32 {
                if a == start {
                    if best.is_none_or(|(bk, _)| k < bk) {
                        best = Some((k, start));
                    }
                    break;
                }
                a = first[a];
            }
        }
        best.expect("the first-letter map has a cycle")
    }

    pub(crate) fn multi_char(&self) -> bool {
        self.names.iter().any(|n| n.chars().count() != 1)
    }

    /// Renders a word, separating symbols by spaces when any name is longer
    /// than one character.
    pub fn format_word(&self, w: &[Letter]) -> String {
        let sep = if self.multi_char() { " " } else { "" };
        w.iter()
            .map(|&a| self.names[a].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.size())
            .map(|a| format!("{}->{}", self.names[a], self.format_word(&self.rules[a])))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        message: message.to_owned(),
    }
}
