//! Backtracking enumeration of block-map tables under pair and forcing
//! constraints.
//!
//! A variable is one table entry (a source window); its value is a target
//! letter. Pair constraints say two entries must form an admissible 2-word of
//! the target. Forcing constraints say an entry equals a fixed position of a
//! word determined by one or two other entries; this is how the commutation
//! relations with `θ` enter.

use crate::substitution::{Letter, Word};
use crate::{Error, Result};

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Forcing {
    pub parents: [usize; 2],
    pub arity: usize,
    pub child: usize,
    pub offset: usize,
}

#[derive(Debug)]
pub(crate) struct Csp {
    nvars: usize,
    nvals: usize,
    pairs: Vec<(usize, usize)>,
    allowed: Vec<bool>,
    forcings: Vec<Forcing>,
    /// Word forced by parent values `(a)` or `(a, b)`, indexed `a` or
    /// `a·nvals + b`.
    images: Vec<Word>,
    pairs_of: Vec<Vec<usize>>,
    parent_of: Vec<Vec<usize>>,
}

impl Csp {
    pub fn new(
        nvars: usize,
        nvals: usize,
        pairs: Vec<(usize, usize)>,
        allowed: Vec<bool>,
        forcings: Vec<Forcing>,
        images: Vec<Word>,
    ) -> Self {
        assert_eq!(allowed.len(), nvals * nvals);
        let mut pairs_of = vec![Vec::new(); nvars];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            pairs_of[a].push(i);
            if b != a {
                pairs_of[b].push(i);
            }
        }
        let mut parent_of = vec![Vec::new(); nvars];
        for (i, f) in forcings.iter().enumerate() {
            parent_of[f.parents[0]].push(i);
            if f.arity == 2 && f.parents[1] != f.parents[0] {
                parent_of[f.parents[1]].push(i);
            }
        }
        Csp {
            nvars,
            nvals,
            pairs,
            allowed,
            forcings,
            images,
            pairs_of,
            parent_of,
        }
    }

    /// Every total assignment satisfying all constraints, in lexicographic
    /// order of the value vector.
    pub fn solve(&self, node_cap: u64) -> Result<Vec<Vec<Letter>>> {
        let mut vals = vec![NONE; self.nvars];
        let mut trail = Vec::with_capacity(self.nvars);
        let mut out = Vec::new();
        let mut nodes = 0u64;
        self.branch(0, &mut vals, &mut trail, &mut out, &mut nodes, node_cap)?;
        Ok(out)
    }

    fn branch(
        &self,
        from: usize,
        vals: &mut Vec<usize>,
        trail: &mut Vec<usize>,
        out: &mut Vec<Vec<Letter>>,
        nodes: &mut u64,
        cap: u64,
    ) -> Result<()> {
        let Some(var) = (from..self.nvars).find(|&v| vals[v] == NONE) else {
            out.push(vals.clone());
            return Ok(());
        };
        for val in 0..self.nvals {
            *nodes += 1;
            if *nodes > cap {
                return Err(Error::ResourceLimit {
                    what: "block-map search nodes",
                    cap,
                });
            }
            let mark = trail.len();
            if self.assign(var, val, vals, trail) {
                self.branch(var + 1, vals, trail, out, nodes, cap)?;
            }
            for v in trail.drain(mark..) {
                vals[v] = NONE;
            }
        }
        Ok(())
    }

    fn assign(&self, var: usize, val: usize, vals: &mut [usize], trail: &mut Vec<usize>) -> bool {
        let mut stack = vec![(var, val)];
        while let Some((v, x)) = stack.pop() {
            if vals[v] != NONE {
                if vals[v] != x {
                    return false;
                }
                continue;
            }
            vals[v] = x;
            trail.push(v);
            for &pc in &self.pairs_of[v] {
                let (a, b) = self.pairs[pc];
                if vals[a] != NONE && vals[b] != NONE && !self.allowed[vals[a] * self.nvals + vals[b]] {
                    return false;
                }
            }
            for &fc in &self.parent_of[v] {
                let f = self.forcings[fc];
                let key = if f.arity == 1 {
                    vals[f.parents[0]]
                } else {
                    let (a, b) = (vals[f.parents[0]], vals[f.parents[1]]);
                    if a == NONE || b == NONE {
                        continue;
                    }
                    a * self.nvals + b
                };
                stack.push((f.child, self.images[key][f.offset]));
            }
        }
        true
    }
}
