//! Top-level decomposition: one candidate chain per proper subset of free
//! variables, split by `unmixed` against the combined input.
//!
//! Candidate chains come from iterated resultants of perturbed generic
//! combinations. For a chain with leaders `y_1..y_c` over the free variables
//! `X`, take `c` generic combinations `G_k` of the input, perturb them to
//! `G_k + s*y_k^d`, eliminate all leaders but `y_j`, and keep the lowest
//! nonvanishing coefficient in `s`. Doing this for two seeds and taking the
//! gcd removes most spurious factors. Each chain is worked on in a permuted
//! variable order with the free variables first.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::QuotientAlgebra;
use crate::chains::{is_regular_chain, NormalizedChain, TriangularSet};
use crate::error::{Error, Result};
use crate::poly::{
    content_in, gcd, parse_polynomial_lines, primitive_part_in, rat, resultant_interpolated, ParseError,
    Polynomial, VariableOrder,
};
use crate::unmixed::unmixed;

/// Seed value that makes [`generic_combination`] return the input unchanged.
pub const IDENTITY_SEED: u64 = u64::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputSystem {
    polys: Vec<Polynomial>,
    order: VariableOrder,
    n: usize,
    d: u32,
}

impl InputSystem {
    /// Zero members are dropped; an all-zero system is rejected.
    pub fn new(polys: Vec<Polynomial>, order: VariableOrder) -> Result<InputSystem> {
        let polys: Vec<Polynomial> = polys.into_iter().filter(|p| !p.is_zero()).collect();
        if polys.is_empty() {
            return Err(Error::InvalidInput("every input polynomial is zero".into()));
        }
        let used = polys
            .iter()
            .filter_map(|p| p.variables().last().copied())
            .max()
            .map_or(0, |v| v + 1);
        let n = used.max(order.len());
        let d = polys.iter().filter_map(|p| p.total_degree()).max().unwrap_or(0);
        Ok(InputSystem { polys, order, n, d })
    }

    pub fn parse(text: &str, order: Option<&VariableOrder>) -> std::result::Result<InputSystem, ParseError> {
        let order = order.cloned().unwrap_or_else(|| VariableOrder::infer(text));
        let polys = parse_polynomial_lines(text, &order)?;
        InputSystem::new(polys, order).map_err(|e| ParseError {
            line: 0,
            message: e.to_string(),
        })
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn order(&self) -> &VariableOrder {
        &self.order
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Largest total degree.
    pub fn d(&self) -> u32 {
        self.d
    }

    /// Index of the last polynomial, `f_0..f_r`.
    pub fn r(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn has_nonzero_constant(&self) -> bool {
        self.polys.iter().any(|p| p.is_constant())
    }
}

/// `f_0 + f_1*y + ... + f_r*y^r` with `y = x_{n+1}`.
pub fn combine_input(system: &InputSystem) -> Polynomial {
    let y = system.n;
    Polynomial::from_coeffs(y, system.polys())
}

/// `count` seeded integer combinations of the inputs. [`IDENTITY_SEED`] with
/// `count = r + 1` returns the system unchanged.
pub fn generic_combination(system: &InputSystem, count: usize, seed: u64) -> InputSystem {
    let k = system.polys.len();
    let coeffs: Vec<Vec<i64>> = if seed == IDENTITY_SEED {
        (0..count)
            .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| (0..k).map(|_| rng.gen_range(1..=97)).collect())
            .collect()
    };
    combination_with(system, &coeffs)
}

/// Combinations with explicit coefficient rows; zero rows are dropped.
pub fn combination_with(system: &InputSystem, coeffs: &[Vec<i64>]) -> InputSystem {
    let polys: Vec<Polynomial> = coeffs
        .iter()
        .map(|row| {
            row.iter()
                .zip(&system.polys)
                .fold(Polynomial::zero(), |acc, (&c, p)| acc + p.scale(&rat(c)))
        })
        .filter(|p| !p.is_zero())
        .collect();
    let d = polys.iter().filter_map(|p| p.total_degree()).max().unwrap_or(0);
    InputSystem {
        polys,
        order: system.order.clone(),
        n: system.n,
        d,
    }
}

/// Variable layout for one index set: the free variables first, then the
/// leaders, each group in the original order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Layout {
    /// Original (0-based) indices of the free variables.
    pub free: Vec<usize>,
    /// `position[k]` is the original variable placed at index `k`.
    pub position: Vec<usize>,
}

impl Layout {
    pub fn new(free: Vec<usize>, n: usize) -> Layout {
        let mut position = free.clone();
        position.extend((0..n).filter(|v| !free.contains(v)));
        Layout { free, position }
    }

    /// Map for [`Polynomial::permute`] from original to permuted indices.
    /// Variables past `n` keep their index.
    pub fn forward(&self, extra: usize) -> Vec<usize> {
        let n = self.position.len();
        let mut map: Vec<usize> = (0..n + extra).collect();
        for (k, &v) in self.position.iter().enumerate() {
            map[v] = k;
        }
        map
    }

    pub fn backward(&self, extra: usize) -> Vec<usize> {
        let n = self.position.len();
        let mut map: Vec<usize> = (0..n + extra).collect();
        map[..n].copy_from_slice(&self.position);
        map
    }

    pub fn to_permuted(&self, p: &Polynomial, extra: usize) -> Polynomial {
        p.permute(&self.forward(extra))
    }

    pub fn to_original(&self, p: &Polynomial) -> Polynomial {
        p.permute(&self.backward(0))
    }

    /// Names of the variables in permuted order.
    pub fn order(&self, order: &VariableOrder) -> VariableOrder {
        order.reordered(&self.position)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub layout: Layout,
    /// In permuted coordinates. `None` when elimination produced no chain.
    pub chain: Option<NormalizedChain>,
    pub note: Option<String>,
}

/// Proper subsets of `0..n`, smallest first.
fn index_sets(n: usize) -> Vec<Vec<usize>> {
    let mut sets: Vec<Vec<usize>> = (0u64..(1u64 << n) - 1)
        .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
        .collect();
    sets.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    sets
}

fn mix(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Eliminates `vars` from `polys` by pairwise resultants against a pivot.
fn eliminate(mut polys: Vec<Polynomial>, vars: &[usize]) -> Result<Option<Polynomial>> {
    for &u in vars {
        let (with, without): (Vec<Polynomial>, Vec<Polynomial>) =
            polys.into_iter().partition(|p| p.involves(u));
        polys = without;
        let Some(pivot_at) = (0..with.len()).min_by_key(|&k| (with[k].deg(u), with[k].num_terms()))
        else {
            continue;
        };
        let pivot = &with[pivot_at];
        for (k, p) in with.iter().enumerate() {
            if k != pivot_at {
                let r = resultant_interpolated(pivot, p, u)?;
                if !r.is_zero() {
                    polys.push(r);
                }
            }
        }
    }
    Ok(polys.into_iter().find(|p| !p.is_zero()))
}

fn lowest_coefficient(p: &Polynomial, s: usize) -> Polynomial {
    p.coeffs_in(s)
        .into_iter()
        .find(|c| !c.is_zero())
        .unwrap_or_else(Polynomial::zero)
}

/// Eliminant for leader position `target` among `leaders` (permuted
/// coordinates), from the combinations drawn with `seed`.
fn eliminant(
    system: &[Polynomial],
    leaders: &[usize],
    target: usize,
    d: u32,
    s: usize,
    seed: u64,
) -> Result<Option<Polynomial>> {
    let combos = generic_combination_polys(system, leaders.len(), seed);
    let perturbed: Vec<Polynomial> = combos
        .iter()
        .zip(leaders)
        .map(|(g, &y)| g + &(&Polynomial::var(s) * &Polynomial::var(y).pow(d.max(1))))
        .collect();
    let others: Vec<usize> = leaders.iter().copied().filter(|&v| v != leaders[target]).collect();
    Ok(eliminate(perturbed, &others)?.map(|r| lowest_coefficient(&r, s)))
}

fn generic_combination_polys(polys: &[Polynomial], count: usize, seed: u64) -> Vec<Polynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            polys
                .iter()
                .fold(Polynomial::zero(), |acc, p| acc + p.scale(&rat(rng.gen_range(1..=97))))
        })
        .collect()
}

/// Product of the distinct irreducible factors of `p`.
fn radical(p: &Polynomial) -> Polynomial {
    let mut g = p.clone();
    for v in p.variables() {
        g = gcd(&g, &p.derivative(v, 1));
    }
    if g.is_constant() {
        p.clone()
    } else {
        p.div_exact(&g).expect("gcd divides")
    }
}

/// Squarefree content times the squarefree part of the primitive part in `y`.
fn squarefree_in(p: &Polynomial, y: usize) -> Polynomial {
    let c = radical(&content_in(p, y));
    let pp = primitive_part_in(p, y);
    let g = gcd(&pp, &pp.derivative(y, 1));
    let sq = if g.involves(y) {
        primitive_part_in(&pp.div_exact(&g).expect("gcd divides"), y)
    } else {
        pp
    };
    (&c * &sq).normalize_scalar()
}

fn candidate_for(system: &InputSystem, layout: Layout, seed: u64) -> Result<Candidate> {
    let n = system.n;
    let l = layout.free.len();
    let leaders: Vec<usize> = (l..n).collect();
    let s = n;
    let polys: Vec<Polynomial> = system.polys.iter().map(|p| layout.to_permuted(p, 1)).collect();
    let mut chain = Vec::with_capacity(leaders.len());
    for target in 0..leaders.len() {
        let y = leaders[target];
        let mut acc: Option<Polynomial> = None;
        for round in 0..2u64 {
            let e = eliminant(&polys, &leaders, target, system.d, s, mix(seed, round))?;
            let Some(e) = e.filter(|e| !e.is_zero()) else {
                continue;
            };
            acc = Some(match acc {
                None => e,
                Some(a) => gcd(&a, &e),
            });
        }
        let absent = |why: String| Candidate {
            layout: layout.clone(),
            chain: None,
            note: Some(why),
        };
        let Some(h) = acc else {
            return Ok(absent(format!("elimination for leader position {} vanished", target + 1)));
        };
        if !h.involves(y) {
            return Ok(absent(format!("eliminant for leader position {} is free of its leader", target + 1)));
        }
        if h.variables().iter().any(|&v| v >= l && v != y) {
            return Ok(absent(format!("eliminant for leader position {} kept other leaders", target + 1)));
        }
        chain.push(squarefree_in(&h, y));
    }
    let chain = NormalizedChain::new(chain, l)?;
    if let Err(e) = is_regular_chain(chain.set()) {
        return Ok(Candidate {
            layout,
            chain: None,
            note: Some(format!("not regular: {e:?}")),
        });
    }
    Ok(Candidate {
        layout,
        chain: Some(chain),
        note: None,
    })
}

/// One candidate per proper subset of the variables.
pub fn candidate_chains(system: &InputSystem, seed: u64) -> Result<Vec<Candidate>> {
    index_sets(system.n)
        .into_iter()
        .enumerate()
        .map(|(k, free)| candidate_for(system, Layout::new(free, system.n), mix(seed, 1000 + k as u64)))
        .collect()
}

/// Reads externally computed chains: blocks separated by blank lines, one
/// polynomial per line in chain order. The free variables of a block are
/// those that are not leaders.
pub fn parse_bypass_chains(
    text: &str,
    order: &VariableOrder,
) -> std::result::Result<Vec<Candidate>, ParseError> {
    let mut blocks: Vec<(usize, String)> = Vec::new();
    let mut current = String::new();
    let mut start = 1;
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            if !current.trim().is_empty() {
                blocks.push((start, std::mem::take(&mut current)));
            }
            current.clear();
            start = k + 2;
        } else {
            current.push_str(line);
        }
        current.push('\n');
    }
    if !current.trim().is_empty() {
        blocks.push((start, current));
    }
    let n = order.len();
    let mut out = Vec::new();
    for (start, block) in blocks {
        let err = |message: String| ParseError {
            line: start,
            message,
        };
        let polys = parse_polynomial_lines(&block, order).map_err(|e| ParseError {
            line: e.line + start - 1,
            message: e.message,
        })?;
        if polys.is_empty() {
            continue;
        }
        let set = TriangularSet::new(polys).map_err(|e| err(e.to_string()))?;
        if set.leaders().iter().any(|&v| v >= n) {
            return Err(err("chain uses a variable outside the order".into()));
        }
        let free: Vec<usize> = (0..n).filter(|v| !set.leaders().contains(v)).collect();
        let layout = Layout::new(free, n);
        let polys = set.polys().iter().map(|p| layout.to_permuted(p, 0)).collect();
        let chain = NormalizedChain::new(polys, layout.free.len()).map_err(|e| err(e.to_string()))?;
        out.push(Candidate {
            layout,
            chain: Some(chain),
            note: None,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct DecomposedComponent {
    pub layout: Layout,
    /// In permuted coordinates.
    pub chain: NormalizedChain,
    pub algebra: QuotientAlgebra,
}

impl DecomposedComponent {
    /// Chain elements in the original variables.
    pub fn original_polys(&self) -> Vec<Polynomial> {
        self.chain.polys().iter().map(|p| self.layout.to_original(p)).collect()
    }

    /// Original indices of the leaders.
    pub fn leaders(&self) -> Vec<usize> {
        self.layout.position[self.layout.free.len()..self.layout.free.len() + self.chain.len()].to_vec()
    }

    /// Number of points of a generic fibre: the product of leader degrees.
    pub fn fibre_degree(&self) -> u64 {
        self.chain.degrees().iter().map(|&d| u64::from(d)).product()
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Sorted, without duplicates.
    pub components: Vec<DecomposedComponent>,
    pub candidates: Vec<Candidate>,
    /// Index sets whose split failed, with the reason.
    pub failures: Vec<(Vec<usize>, String)>,
    /// Set when the input has a nonzero constant member.
    pub inconsistent: bool,
}

pub fn triangular_decompose(system: &InputSystem, seed: u64) -> Result<Decomposition> {
    if system.has_nonzero_constant() {
        return Ok(Decomposition {
            components: Vec::new(),
            candidates: Vec::new(),
            failures: Vec::new(),
            inconsistent: true,
        });
    }
    let candidates = candidate_chains(system, seed)?;
    decompose_with(system, candidates, seed)
}

/// Splits the given candidates against the combined input.
pub fn decompose_with(system: &InputSystem, candidates: Vec<Candidate>, seed: u64) -> Result<Decomposition> {
    let f = combine_input(system);
    let mut merged: BTreeMap<(Layout, NormalizedChain), DecomposedComponent> = BTreeMap::new();
    let mut failures = Vec::new();
    for (k, cand) in candidates.iter().enumerate() {
        let Some(chain) = &cand.chain else {
            continue;
        };
        let fp = cand.layout.to_permuted(&f, 1);
        match unmixed(chain, &fp, &Polynomial::one(), mix(seed, 5000 + k as u64)) {
            Ok(out) => {
                for c in out.components {
                    merged
                        .entry((cand.layout.clone(), c.chain.clone()))
                        .or_insert(DecomposedComponent {
                            layout: cand.layout.clone(),
                            chain: c.chain,
                            algebra: c.algebra,
                        });
                }
            }
            Err(e) => failures.push((cand.layout.free.clone(), e.to_string())),
        }
    }
    Ok(Decomposition {
        components: merged.into_values().collect(),
        candidates,
        failures,
        inconsistent: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::rep_membership;
    use crate::poly::parse_polynomial;

    fn sys(lines: &[&str], n: usize) -> InputSystem {
        let order = VariableOrder::standard(n);
        let polys = lines.iter().map(|s| parse_polynomial(s, &order).unwrap()).collect();
        InputSystem::new(polys, order).unwrap()
    }

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, &VariableOrder::standard(4)).unwrap()
    }

    #[test]
    fn combined_input() {
        assert_eq!(combine_input(&sys(&["x1", "x2"], 2)), p("x1 + x2*x3"));
        assert_eq!(combine_input(&sys(&["x1^2"], 1)), p("x1^2"));
        let three = sys(&["x1", "x1 + 1", "2"], 1);
        assert_eq!(combine_input(&three), p("x1 + (x1 + 1)*x2 + 2*x2^2"));
    }

    #[test]
    fn combinations() {
        let s = sys(&["x1", "x2"], 2);
        assert_eq!(generic_combination(&s, 2, IDENTITY_SEED), s);
        assert_eq!(combination_with(&s, &[vec![1, 1]]).polys(), &[p("x1 + x2")]);
        let g = generic_combination(&s, 3, 4);
        assert_eq!(g, generic_combination(&s, 3, 4));
        assert_eq!(g.polys().len(), 3);
    }

    #[test]
    fn all_zero_is_rejected() {
        let order = VariableOrder::standard(1);
        assert!(InputSystem::new(vec![Polynomial::zero()], order).is_err());
    }

    #[test]
    fn single_univariate() {
        let d = triangular_decompose(&sys(&["x1"], 1), 1).unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.components[0].original_polys(), vec![p("x1")]);
    }

    #[test]
    fn univariate_squarefree() {
        let d = triangular_decompose(&sys(&["(x1 - 1)*(x1 - 2)"], 1), 1).unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.components[0].original_polys(), vec![p("x1^2 - 3*x1 + 2")]);
    }

    #[test]
    fn constant_member_gives_empty() {
        let d = triangular_decompose(&sys(&["x1", "3"], 1), 1).unwrap();
        assert!(d.inconsistent && d.components.is_empty());
    }

    #[test]
    fn layout_round_trip() {
        let l = Layout::new(vec![1], 3);
        assert_eq!(l.position, vec![1, 0, 2]);
        let q = p("x1^2*x2 + x3");
        let moved = l.to_permuted(&q, 0);
        assert_eq!(moved, p("x2^2*x1 + x3"));
        assert_eq!(l.to_original(&moved), q);
    }

    #[test]
    fn candidates_for_a_product() {
        let s = sys(&["(x1 - 1)*(x2 - 1)"], 2);
        let c = candidate_chains(&s, 3).unwrap();
        assert_eq!(c.len(), 3);
        let line = c.iter().find(|c| c.layout.free == vec![0]).unwrap();
        assert_eq!(line.chain.as_ref().unwrap().polys(), &[p("x1*x2 - x1 - x2 + 1")]);
        let points = c.iter().find(|c| c.layout.free.is_empty()).unwrap();
        let chain = points.chain.as_ref().unwrap();
        assert!(rep_membership(&p("x1 - 1"), &TriangularSet::new(vec![chain.polys()[0].clone()]).unwrap()) || {
            chain.polys()[0].eval(&[rat(1)]) == rat(0)
        });
    }

    #[test]
    fn radical_of_content() {
        assert_eq!(radical(&p("(x1 - 1)^2*(x2 + x1)^3*x2")).normalize_scalar(), p("(x1 - 1)*(x2 + x1)*x2").normalize_scalar());
        assert_eq!(squarefree_in(&p("(x1 - 1)^2*(x2^2 - x1)"), 1), p("(x1 - 1)*(x2^2 - x1)"));
    }

    #[test]
    fn bypass_blocks() {
        let order = VariableOrder::standard(2);
        let c = parse_bypass_chains("x1 - 1\nx2 - 2\n\n# line\nx2 - 1\n", &order).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[1].layout.free, vec![0]);
        let c = parse_bypass_chains("x1^2\n\nx1 - 1\n", &order).unwrap();
        assert_eq!(c[1].layout.free, vec![1]);
        assert!(parse_bypass_chains("x2\nx1\n", &order).is_err());
    }
}
