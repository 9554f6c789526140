//! The TM operator bracket and analytic Laplacians of Gaussian chains.
//!
//! For `g = exp(-1/2 x^T L x)` in one coordinate, any product of second
//! derivatives divided by `g` is a sum over partial pairings of the
//! differentiated indices: each pair `(i, j)` contributes `-L_ij` and each
//! unpaired index `i` contributes `-(L x)_i`. Coordinates are independent,
//! so the full Laplacian product is a subset convolution over dimensions.
//!
//! Every pair and single carries exactly one power of `L`, so when `L`
//! scales as `1 / T` the result is a polynomial in `1 / T`; the functions
//! here return it graded by that power.

use crate::error::{CasimirError, Result};

use super::density::GaussianChainDensity;

/// `(2n - 1)!!`, with `(-1)!! = 1`.
pub fn odd_double_factorial(n: usize) -> f64 {
    (1..=n).map(|j| (2 * j - 1) as f64).product()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianTerm {
    /// Zero-based indices of the atoms carrying a Laplacian.
    pub subset: Vec<usize>,
    pub weight: f64,
}

/// `sum_S w(S) prod_{i in S} nabla_i^2` with
/// `w(S) = (2(k - |S|) - 1)!! (-T/2)^|S|`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianExpansion {
    pub order: usize,
    pub total_time: f64,
    pub terms: Vec<LaplacianTerm>,
}

pub fn laplacian_expansion(k: usize, total_time: f64) -> Result<LaplacianExpansion> {
    if k == 0 {
        return Err(CasimirError::InvalidParameter("expansion order must be >= 1".into()));
    }
    let terms = (0..1usize << k)
        .map(|mask| {
            let subset: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
            let weight = subset_weight(k, subset.len()) * total_time.powi(subset.len() as i32);
            LaplacianTerm { subset, weight }
        })
        .collect();
    Ok(LaplacianExpansion {
        order: k,
        total_time,
        terms,
    })
}

/// `w(S) / T^|S|`.
pub fn subset_weight(k: usize, size: usize) -> f64 {
    odd_double_factorial(k - size) * (-0.5f64).powi(size as i32)
}

/// One factor of a pairing monomial: `L_ij` or `b_i = (L x)_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Factor {
    Pair(usize, usize),
    Single(usize),
}

/// `multiplicity * prod(-factor)`; the degree in `L` is `factors.len()`.
#[derive(Debug, Clone)]
struct Monomial {
    coefficient: f64,
    factors: Vec<Factor>,
}

/// The pairing monomials of `prod_{i in S} d_i^2 g / g` for every subset `S`
/// of `n` points, independent of `L` and `x`. Build once, evaluate often.
#[derive(Debug, Clone)]
pub struct PairingTable {
    n: usize,
    by_mask: Vec<Vec<Monomial>>,
}

impl PairingTable {
    pub fn new(n: usize) -> Self {
        assert!(n < 16, "too many chain points for subset enumeration");
        fn enumerate(idx: &[usize], acc: &mut Vec<Factor>, out: &mut std::collections::BTreeMap<Vec<Factor>, i64>) {
            let Some((&a, rest)) = idx.split_first() else {
                let mut key = acc.clone();
                key.sort();
                *out.entry(key).or_insert(0) += 1;
                return;
            };
            acc.push(Factor::Single(a));
            enumerate(rest, acc, out);
            acc.pop();
            for j in 0..rest.len() {
                let mut others = rest.to_vec();
                let b = others.remove(j);
                acc.push(Factor::Pair(a.min(b), a.max(b)));
                enumerate(&others, acc, out);
                acc.pop();
            }
        }
        let by_mask = (0..1usize << n)
            .map(|m| {
                let idx: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).flat_map(|i| [i, i]).collect();
                let mut terms = std::collections::BTreeMap::new();
                enumerate(&idx, &mut Vec::new(), &mut terms);
                terms
                    .into_iter()
                    .map(|(factors, count)| Monomial {
                        coefficient: if factors.len() % 2 == 0 { count as f64 } else { -count as f64 },
                        factors,
                    })
                    .collect()
            })
            .collect();
        Self { n, by_mask }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// `prod_{i in S} nabla_i^2 g / g` for every subset `S` of the chain's
/// points (indexed by bitmask), graded: entry `[mask][n]` multiplies
/// `lambda^n` when `L` is replaced by `lambda L`.
pub fn graded_laplacian_ratios(chain: &GaussianChainDensity) -> Vec<Vec<f64>> {
    let table = PairingTable::new(chain.points().len());
    let len = 2 * table.n + 1;
    graded_ratios_flat(&table, chain)
        .chunks(len)
        .map(|c| c.to_vec())
        .collect()
}

/// Flat `[mask * (2n + 1) + degree]` layout of [`graded_laplacian_ratios`].
/// A subset of size `s` only has degrees `s..=2s`.
fn graded_ratios_flat(table: &PairingTable, chain: &GaussianChainDensity) -> Vec<f64> {
    let n = chain.points().len();
    assert_eq!(table.n, n, "pairing table built for a different chain size");
    let l = chain.precision();
    let masks = 1usize << n;
    let len = 2 * n + 1;
    let size: Vec<usize> = (0..masks).map(|m| m.count_ones() as usize).collect();
    let mut total = vec![0.0; masks * len];
    total[0] = 1.0;
    let mut per_dim = vec![0.0; masks * len];
    let mut next = vec![0.0; masks * len];
    let mut b = vec![0.0; n];
    for alpha in 0..GaussianChainDensity::DIM {
        for (i, bi) in b.iter_mut().enumerate() {
            *bi = (0..n).map(|j| l[i][j] * chain.points()[j][alpha]).sum();
        }
        per_dim.iter_mut().for_each(|c| *c = 0.0);
        for (m, monomials) in table.by_mask.iter().enumerate() {
            for mono in monomials {
                let value = mono.factors.iter().fold(mono.coefficient, |acc, f| {
                    acc * match *f {
                        Factor::Pair(i, j) => l[i][j],
                        Factor::Single(i) => b[i],
                    }
                });
                per_dim[m * len + mono.factors.len()] += value;
            }
        }
        next.iter_mut().for_each(|c| *c = 0.0);
        for m in 0..masks {
            // enumerate sub ⊆ m, including m itself and the empty set
            let mut sub = m;
            loop {
                let rest = m & !sub;
                let (p, q) = (rest * len, sub * len);
                for i in size[rest]..=2 * size[rest] {
                    let x = total[p + i];
                    if x == 0.0 {
                        continue;
                    }
                    for j in size[sub]..=2 * size[sub] {
                        next[m * len + i + j] += x * per_dim[q + j];
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & m;
            }
        }
        std::mem::swap(&mut total, &mut next);
    }
    total
}

fn mask_of(subset: &[usize]) -> usize {
    subset.iter().fold(0, |m, &i| m | 1 << i)
}

/// `prod_{i in S} nabla_i^2` applied to the chain density, evaluated at the
/// chain's points.
pub fn gaussian_laplacian(chain: &GaussianChainDensity, subset: &[usize]) -> f64 {
    let ratios = graded_laplacian_ratios(chain);
    chain.value() * ratios[mask_of(subset)].iter().sum::<f64>()
}

/// The expansion applied to a chain built at unit proper time, as a
/// polynomial in `1 / T`: returns `c_j` with
/// `sum_S w(S) prod nabla^2 g / g = sum_j c_j T^{-j}`.
///
/// Every chain point carries an operator, so the order is the chain size.
pub fn bracket_polynomial(table: &PairingTable, chain_at_unit_time: &GaussianChainDensity) -> Vec<f64> {
    let k = chain_at_unit_time.points().len();
    let ratios = graded_ratios_flat(table, chain_at_unit_time);
    let mut out = vec![0.0; k + 1];
    for (mask, graded) in ratios.chunks(2 * k + 1).enumerate() {
        let size = mask.count_ones() as usize;
        let w = subset_weight(k, size);
        for (g, &c) in graded.iter().enumerate() {
            if c != 0.0 {
                // T^|S| * T^{-g}
                out[g - size] += w * c;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::worldline::density::{BridgePinning, ChainFactor};
    use std::f64::consts::PI;

    #[test]
    fn double_factorials() {
        let v: Vec<f64> = (0..5).map(odd_double_factorial).collect();
        assert_eq!(v, vec![1.0, 1.0, 3.0, 15.0, 105.0]);
    }

    #[test]
    fn expansion_weights() {
        let t = 0.8;
        let e = laplacian_expansion(2, t).unwrap();
        let w: Vec<f64> = e.terms.iter().map(|x| x.weight).collect();
        assert_eq!(w, vec![3.0, -t / 2.0, -t / 2.0, t * t / 4.0]);
        let e = laplacian_expansion(3, t).unwrap();
        assert_eq!(e.terms.len(), 8);
        for term in &e.terms {
            let want = match term.subset.len() {
                0 => 15.0,
                1 => -3.0 * t / 2.0,
                2 => t * t / 4.0,
                _ => -t.powi(3) / 8.0,
            };
            assert!((term.weight - want).abs() < 1e-15);
        }
        let e = laplacian_expansion(1, t).unwrap();
        assert_eq!(e.terms[0].weight, 1.0);
        assert_eq!(e.terms[1].weight, -t / 2.0);
        assert!(laplacian_expansion(0, t).is_err());
    }

    #[test]
    fn laplacian_at_peak() {
        let v = 0.37;
        let chain = GaussianChainDensity::new(
            vec![[0.2, 0.1, 0.0], [0.2, 0.1, 0.0]],
            vec![ChainFactor {
                coefficients: vec![1.0, -1.0],
                variance: v,
            }],
        )
        .unwrap();
        let want = -3.0 / v * (2.0 * PI * v).powf(-1.5);
        let got = gaussian_laplacian(&chain, &[0]);
        assert!((got - want).abs() < 1e-13 * want.abs());
    }

    #[test]
    fn laplacians_commute() {
        let p = BridgePinning::new(2.0, vec![0.0, 0.7], vec![[0.0; 3], [0.4, -0.3, 0.5]]).unwrap();
        let chain = GaussianChainDensity::from_pinning(&p);
        let a = gaussian_laplacian(&chain, &[0, 1]);
        let b = gaussian_laplacian(&chain, &[1, 0]);
        assert_eq!(a, b);
    }

    #[test]
    fn grading_tracks_precision_scaling() {
        let p = BridgePinning::new(
            1.0,
            vec![0.0, 0.3, 0.6],
            vec![[0.0; 3], [0.0, 0.0, 0.5], [0.0, 0.0, 1.0]],
        )
        .unwrap();
        let unit = GaussianChainDensity::from_pinning(&p);
        let t: f64 = 2.5;
        let scaled = GaussianChainDensity::from_pinning(
            &BridgePinning::new(t, vec![0.0, 0.3 * t, 0.6 * t], p.points().to_vec()).unwrap(),
        );
        let (gu, gs) = (graded_laplacian_ratios(&unit), graded_laplacian_ratios(&scaled));
        for mask in 0..8 {
            let a: f64 = gu[mask].iter().enumerate().map(|(g, c)| c * t.powi(-(g as i32))).sum();
            let b: f64 = gs[mask].iter().sum();
            assert!((a - b).abs() < 1e-12 * b.abs().max(1.0), "mask {mask}");
        }
    }
}
