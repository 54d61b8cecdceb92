//! The subset graph of column-map images, the sofic shift `Σ_θ` it presents,
//! and the fingerprint prune built on it.
//!
//! Digit sequences of `ℤ_r` are left-infinite, `… z_2 z_1 z_0`. A finite
//! segment `z_{n-1} … z_m` is forbidden when
//! `|θ_{z_m} ∘ … ∘ θ_{z_{n-1}}(𝒜)| = c`; the least significant digit is the
//! outermost map. Edges run from `θ_i(B)` to `B`, so a digit segment read from
//! `z_m` upwards is the label sequence of a path.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write;

use serde::Serialize;

use crate::language::Shift;
use crate::radic::RAdicDigits;
use crate::substitution::{Letter, Substitution};
use crate::{Error, RAdic, Result};

/// A subset of the alphabet as a bit mask.
pub type Subset = u64;

fn image(col: &[Letter], set: Subset) -> Subset {
    let mut out = 0;
    let mut s = set;
    while s != 0 {
        let a = s.trailing_zeros() as usize;
        out |= 1 << col[a];
        s &= s - 1;
    }
    out
}

fn size(set: Subset) -> usize {
    set.count_ones() as usize
}

fn full(n: usize) -> Subset {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Letters of a subset in alphabet order.
pub fn members(set: Subset) -> Vec<Letter> {
    (0..64).filter(|&a| set >> a & 1 == 1).collect()
}

/// Edge `θ_label(to) = from`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: usize,
}

/// Graph presenting `Σ_θ`, with the numbers read off it.
#[derive(Clone, Debug, Serialize)]
pub struct SubsetAutomaton {
    /// Alphabet size and substitution length.
    pub letters: usize,
    pub length: usize,
    /// `𝒜` first, then the reachable images of size `> c` by decreasing size.
    pub vertices: Vec<Subset>,
    pub edges: Vec<Edge>,
    /// Column number.
    pub c: usize,
    /// Length of the shortest forbidden word.
    pub j: usize,
    /// A shortest forbidden word, least significant digit first.
    pub shortest_forbidden_word: Vec<usize>,
    pub sigma_empty: bool,
    /// `|P|`, the number of two-sided `θ`-periodic points.
    pub periodic_count: usize,
    /// Seeds `(x_{-1}, x_0)` of the `θ`-periodic points.
    pub periodic_seeds: Vec<(Letter, Letter)>,
    /// `|P| > c`: `Σ̂` also contains `0̄` and `(r-1)̄`.
    pub augment: bool,
    #[serde(skip)]
    columns: Vec<Vec<Letter>>,
}

/// Every image `θ_{w_1} ∘ … ∘ θ_{w_k}(𝒜)`, `𝒜` included, with its BFS depth
/// and the word that first reached it (least significant digit first).
fn reachable(sub: &Substitution) -> Result<BTreeMap<Subset, (usize, Vec<usize>)>> {
    if sub.size() > 64 {
        return Err(Error::Precondition(
            "subset graph supports at most 64 letters".into(),
        ));
    }
    let cols = sub.columns();
    let start = full(sub.size());
    let mut seen = BTreeMap::from([(start, (0usize, Vec::new()))]);
    let mut queue = VecDeque::from([start]);
    while let Some(b) = queue.pop_front() {
        let (depth, word) = seen[&b].clone();
        for (i, col) in cols.iter().enumerate() {
            let img = image(col, b);
            if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(img) {
                // Prepending i as the outer map: θ_i ∘ (word)
                let mut w = vec![i];
                w.extend_from_slice(&word);
                e.insert((depth + 1, w));
                queue.push_back(img);
            }
        }
    }
    Ok(seen)
}

/// Least cardinality of an image of `𝒜` under a composition of column maps.
pub fn column_number(sub: &Substitution) -> Result<usize> {
    Ok(reachable(sub)?.keys().map(|&b| size(b)).min().unwrap())
}

/// Builds the graph and fills `c`, `j`, `|P|` and the `Σ` flags.
pub fn subset_graph(sub: &Substitution) -> Result<SubsetAutomaton> {
    let reach = reachable(sub)?;
    let c = reach.keys().map(|&b| size(b)).min().unwrap();
    let top = full(sub.size());
    let (j, shortest_forbidden_word) = reach
        .iter()
        .filter(|(&b, _)| size(b) == c)
        .map(|(_, (d, w))| (*d, w.clone()))
        .min()
        .map(|(d, w)| if d == 0 { (1, vec![0]) } else { (d, w) })
        .unwrap();

    let mut vertices: Vec<Subset> = reach.keys().copied().filter(|&b| size(b) > c && b != top).collect();
    vertices.sort_by_key(|&b| (std::cmp::Reverse(size(b)), members(b)));
    vertices.insert(0, top);
    let id: HashMap<Subset, usize> = vertices.iter().enumerate().map(|(i, &b)| (b, i)).collect();

    let columns = sub.columns();
    let mut edges = Vec::new();
    for (to, &b) in vertices.iter().enumerate() {
        for (label, col) in columns.iter().enumerate() {
            if let Some(&from) = id.get(&image(col, b)) {
                edges.push(Edge { from, to, label });
            }
        }
    }

    let sigma_empty = !has_cycle(&vertices, &edges, c);
    let periodic_seeds = periodic_seeds(sub);
    let periodic_count = periodic_seeds.len();
    Ok(SubsetAutomaton {
        letters: sub.size(),
        length: sub.length(),
        vertices,
        edges,
        c,
        j,
        shortest_forbidden_word,
        sigma_empty,
        periodic_count,
        periodic_seeds,
        augment: periodic_count > c,
        columns,
    })
}

/// Cycle search restricted to vertices of size `> c`.
fn has_cycle(vertices: &[Subset], edges: &[Edge], c: usize) -> bool {
    let n = vertices.len();
    let live: Vec<bool> = vertices.iter().map(|&b| size(b) > c).collect();
    let mut succ = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for e in edges {
        if live[e.from] && live[e.to] {
            succ[e.from].push(e.to);
            indeg[e.to] += 1;
        }
    }
    // Kahn: whatever cannot be peeled lies on or behind a cycle.
    let mut queue: Vec<usize> = (0..n).filter(|&v| live[v] && indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = queue.pop() {
        removed += 1;
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w);
            }
        }
    }
    removed < live.iter().filter(|&&l| l).count()
}

fn on_cycle(map: &[Letter]) -> Vec<bool> {
    let n = map.len();
    (0..n)
        .map(|a| {
            let mut b = map[a];
            for _ in 0..n {
                if b == a {
                    return true;
                }
                b = map[b];
            }
            false
        })
        .collect()
}

/// Pairs `(x_{-1}, x_0) ∈ L_2` with `x_{-1}` periodic under the last-letter
/// map and `x_0` periodic under the first-letter map.
fn periodic_seeds(sub: &Substitution) -> Vec<(Letter, Letter)> {
    let last = on_cycle(&sub.column(sub.length() - 1));
    let first = on_cycle(&sub.column(0));
    let shift = Shift::new(sub.clone());
    shift
        .words(2)
        .iter()
        .filter(|w| last[w[0]] && first[w[1]])
        .map(|w| (w[0], w[1]))
        .collect()
}

/// `|P|` for a substitution.
pub fn periodic_points_count(sub: &Substitution) -> usize {
    periodic_seeds(sub).len()
}

/// Length of the shortest forbidden word.
pub fn shortest_forbidden(sub: &Substitution) -> Result<usize> {
    Ok(subset_graph(sub)?.j)
}

/// Reason a fingerprint was rejected: `x ∈ Σ̂` is periodic but `x + sign·t`
/// has no tail in `Σ̂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PruneWitness {
    pub x: RAdic,
    pub sign: i8,
    pub image: RAdic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Admissibility {
    Accept { points_tested: usize },
    Reject { witness: PruneWitness },
}

impl Admissibility {
    pub fn is_accept(&self) -> bool {
        matches!(self, Admissibility::Accept { .. })
    }
}

/// Most periodic points of `Σ̂` probed by one prune call.
const POINT_BUDGET: usize = 4096;

impl SubsetAutomaton {
    pub fn columns(&self) -> &[Vec<Letter>] {
        &self.columns
    }

    /// `|θ_{w_0} ∘ θ_{w_1} ∘ … ∘ θ_{w_{k-1}}(𝒜)|` for digits given least
    /// significant first.
    pub fn image_size(&self, digits: &[usize]) -> usize {
        let mut set = full(self.letters);
        for &d in digits.iter().rev() {
            set = image(&self.columns[d], set);
        }
        size(set)
    }

    /// True when some path in the graph of vertices of size `> c` carries the
    /// labels `w_0, w_1, …` (edge `θ_{w_0}(B_1) = B_0` first).
    pub fn is_path_word(&self, digits: &[usize]) -> bool {
        let live: Vec<usize> = (0..self.vertices.len())
            .filter(|&v| size(self.vertices[v]) > self.c)
            .collect();
        // frontier = vertices B_k that can end a path labelled w_k … w_{n-1}
        let mut frontier: Vec<bool> = vec![false; self.vertices.len()];
        for &v in &live {
            frontier[v] = true;
        }
        for &d in digits.iter().rev() {
            let mut next = vec![false; self.vertices.len()];
            for e in &self.edges {
                if e.label == d && frontier[e.to] && size(self.vertices[e.from]) > self.c {
                    next[e.from] = true;
                }
            }
            frontier = next;
        }
        frontier.iter().any(|&b| b)
    }

    /// Whether the purely periodic point with period `digits` (least
    /// significant first) lies in `Σ`.
    pub fn periodic_in_sigma(&self, digits: &[usize]) -> bool {
        if digits.is_empty() {
            return false;
        }
        // M = θ_{d_0} ∘ … ∘ θ_{d_{q-1}}, iterated on 𝒜 until the image is stable
        let mut map: Vec<Letter> = (0..self.letters).collect();
        for &d in digits.iter().rev() {
            map = map.iter().map(|&a| self.columns[d][a]).collect();
        }
        let mut set = full(self.letters);
        loop {
            let next = image(&map, set);
            if next == set {
                return size(set) > self.c;
            }
            set = next;
        }
    }

    /// Membership of a purely periodic point in `Σ̂`.
    pub fn periodic_in_sigma_hat(&self, digits: &[usize]) -> bool {
        let r = self.length;
        let constant = |v: usize| digits.iter().all(|&d| d == v);
        (self.augment && (constant(0) || constant(r - 1))) || self.periodic_in_sigma(digits)
    }

    /// Membership of an eventually periodic point in `Σ̃`: its periodic tail
    /// must lie in `Σ̂`.
    pub fn in_sigma_tilde(&self, digits: &RAdicDigits) -> bool {
        let period: Vec<usize> = digits.period.iter().map(|&d| d as usize).collect();
        self.periodic_in_sigma_hat(&period)
    }

    /// Purely periodic points of `Σ̂` with period at most `pmax`, as digit
    /// words (least significant first), primitive periods only, shortest
    /// first, at most `budget` of them.
    pub fn periodic_points(&self, pmax: usize, budget: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        if self.augment {
            out.push(vec![0]);
            out.push(vec![self.length - 1]);
        }
        let identity: Vec<Letter> = (0..self.letters).collect();
        for q in 1..=pmax {
            let mut word = Vec::with_capacity(q);
            self.periodic_dfs(q, &mut word, &identity, &mut out, budget);
            if out.len() >= budget {
                break;
            }
        }
        out.truncate(budget);
        out
    }

    fn periodic_dfs(
        &self,
        q: usize,
        word: &mut Vec<usize>,
        map: &[Letter],
        out: &mut Vec<Vec<usize>>,
        budget: usize,
    ) {
        if out.len() >= budget {
            return;
        }
        if word.len() == q {
            if is_primitive_word(word)
                && self.periodic_in_sigma(word)
                && !out.iter().any(|w| w == word)
            {
                out.push(word.clone());
            }
            return;
        }
        for d in 0..self.length {
            // composition θ_{w_0} ∘ … ∘ θ_{w_k} ∘ θ_d
            let next: Vec<Letter> = (0..self.letters).map(|a| map[self.columns[d][a]]).collect();
            if size(image(&next, full(self.letters))) <= self.c {
                continue;
            }
            word.push(d);
            self.periodic_dfs(q, word, &next, out, budget);
            word.pop();
        }
    }

    /// Sound prune for automorphism fingerprints: `Σ̃ + t = Σ̃` must hold, so
    /// any periodic `x ∈ Σ̂` with `x ± t ∉ Σ̃` rules `t` out.
    pub fn kappa_admissible(&self, t: &RAdic, pmax: usize) -> Admissibility {
        if t.is_integer() {
            return Admissibility::Accept { points_tested: 0 };
        }
        let r = self.length as u64;
        let points = self.periodic_points(pmax, POINT_BUDGET);
        for p in &points {
            let x = periodic_value(p, r);
            for sign in [1i8, -1] {
                let y = if sign > 0 { x.add(t) } else { x.sub(t) };
                if !self.in_sigma_tilde(&y.expand()) {
                    return Admissibility::Reject {
                        witness: PruneWitness {
                            x,
                            sign,
                            image: y,
                        },
                    };
                }
            }
        }
        Admissibility::Accept {
            points_tested: points.len(),
        }
    }

    /// Graphviz rendering with set-literal vertex labels and comma-joined
    /// digit labels on merged parallel edges.
    pub fn to_dot(&self, sub: &Substitution) -> String {
        let mut out = String::from("digraph sigma {\n");
        for (i, &b) in self.vertices.iter().enumerate() {
            let names: Vec<&str> = members(b).into_iter().map(|a| sub.name(a)).collect();
            let _ = writeln!(out, "  v{i} [label=\"{{{}}}\"];", names.join(","));
        }
        for ((from, to), labels) in self.grouped_edges() {
            let labels: Vec<String> = labels.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "  v{from} -> v{to} [label=\"{}\"];", labels.join(","));
        }
        out.push_str("}\n");
        out
    }

    /// Edges merged by endpoints, labels ascending.
    pub fn grouped_edges(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut grouped: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for e in &self.edges {
            grouped.entry((e.from, e.to)).or_default().push(e.label);
        }
        grouped
    }

    /// A vertex rendered as `{a,b}`.
    pub fn vertex_label(&self, v: usize, sub: &Substitution) -> String {
        let names: Vec<&str> = members(self.vertices[v]).into_iter().map(|a| sub.name(a)).collect();
        format!("{{{}}}", names.join(","))
    }
}

fn is_primitive_word(w: &[usize]) -> bool {
    let n = w.len();
    (1..n).all(|p| !n.is_multiple_of(p) || w.iter().enumerate().any(|(i, &d)| d != w[(i + p) % n]))
}

/// `V/(1 - r^q)`, the purely periodic point with period `digits`.
pub fn periodic_value(digits: &[usize], r: u64) -> RAdic {
    let period = RAdicDigits {
        base: r,
        preperiod: Vec::new(),
        period: digits.iter().map(|&d| d as u32).collect(),
    };
    RAdic::from_digits(&period).expect("denominator 1 - r^q is coprime to r")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(t: &str) -> Substitution {
        Substitution::parse(t).unwrap()
    }

    fn abbc() -> Substitution {
        parse("a->abbc\nb->cbab\nc->cbba")
    }

    fn set(sub: &Substitution, s: &str) -> Subset {
        s.chars().map(|c| 1u64 << sub.letter(&c.to_string()).unwrap()).sum()
    }

    #[test]
    fn column_numbers() {
        assert_eq!(column_number(&abbc()).unwrap(), 1);
        assert_eq!(column_number(&parse("0->01\n1->10")).unwrap(), 2);
        assert_eq!(column_number(&parse("a->aba\nb->cba\nc->ccb")).unwrap(), 1);
    }

    #[test]
    fn abbc_subset_graph() {
        let s = abbc();
        let g = subset_graph(&s).unwrap();
        let labels: Vec<String> = (0..g.vertices.len()).map(|v| g.vertex_label(v, &s)).collect();
        assert_eq!(labels, vec!["{a,b,c}", "{a,b}", "{a,c}", "{b,c}"]);
        let v = |t: &str| g.vertices.iter().position(|&b| b == set(&s, t)).unwrap();
        let expected: BTreeMap<(usize, usize), Vec<usize>> = [
            ((v("abc"), v("abc")), vec![3]),
            ((v("ac"), v("abc")), vec![0]),
            ((v("ab"), v("abc")), vec![2]),
            ((v("ac"), v("ac")), vec![0, 3]),
            ((v("ab"), v("ab")), vec![2]),
            ((v("ac"), v("ab")), vec![0]),
            ((v("ab"), v("bc")), vec![2, 3]),
            ((v("bc"), v("ab")), vec![3]),
        ]
        .into_iter()
        .collect();
        assert_eq!(g.grouped_edges(), expected);
        assert_eq!((g.c, g.j), (1, 1));
        assert!(!g.sigma_empty);
        assert!(g.to_dot(&s).contains("label=\"0,3\""));
    }

    #[test]
    fn thue_morse_sigma() {
        let g = subset_graph(&parse("0->01\n1->10")).unwrap();
        assert!(g.sigma_empty);
        assert_eq!((g.c, g.j, g.periodic_count), (2, 1, 4));
        assert!(g.augment);
        assert!(g.periodic_in_sigma_hat(&[0]) && g.periodic_in_sigma_hat(&[1]));
        assert!(!g.periodic_in_sigma_hat(&[0, 1]));
    }

    #[test]
    fn periodic_counts() {
        let g = subset_graph(&parse("a->aba\nb->cba\nc->ccb")).unwrap();
        assert_eq!(g.periodic_seeds, vec![(0, 0), (0, 2)]);
        assert_eq!((g.c, g.j), (1, 2));
        assert!(g.augment);
        let pd = subset_graph(&parse("a->ab\nb->aa")).unwrap();
        assert_eq!(pd.periodic_seeds, vec![(0, 0), (1, 0)]);
        assert!(pd.augment && pd.c == 1);
    }

    #[test]
    fn two_letter_sigma_is_full_shift_on_free_columns() {
        // columns 0 and 2 are bijective, column 1 is constant
        let s = parse("a->aab\nb->baa");
        let g = subset_graph(&s).unwrap();
        for len in 1..=5usize {
            for code in 0..3usize.pow(len as u32) {
                let w: Vec<usize> = (0..len).map(|i| code / 3usize.pow(i as u32) % 3).collect();
                assert_eq!(g.is_path_word(&w), !w.contains(&1), "{w:?}");
            }
        }
    }

    #[test]
    fn prune_example() {
        let g = subset_graph(&abbc()).unwrap();
        let t = RAdic::from_ratio(-1, 3, 4).unwrap();
        match g.kappa_admissible(&t, 8) {
            Admissibility::Reject { witness } => {
                assert!(witness.x.is_zero());
                assert_eq!(witness.image.expand().render(), "(1)");
            }
            other => panic!("expected rejection, got {other:?}"),
        }
        assert!(g.kappa_admissible(&RAdic::zero(4), 8).is_accept());
        let g21 = subset_graph(&parse("a->aba\nb->cba\nc->ccb")).unwrap();
        let half = RAdic::from_ratio(-1, 2, 3).unwrap();
        let v = g21.kappa_admissible(&half, 8);
        assert!(v.is_accept(), "{v:?} {:?} {:?}", g21.vertices, g21.edges);
    }

    #[test]
    fn periodic_value_matches_digits() {
        assert_eq!(periodic_value(&[1], 4), RAdic::from_ratio(-1, 3, 4).unwrap());
        assert_eq!(periodic_value(&[1], 3), RAdic::from_ratio(-1, 2, 3).unwrap());
        assert!(is_primitive_word(&[0, 1]) && !is_primitive_word(&[1, 1]));
    }
}
