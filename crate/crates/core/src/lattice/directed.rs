//! Dynamic programs over directed paths in a box `[from, to]`.
//!
//! Vertex-weighted models (last passage, polymers) follow the convention that
//! a path's weight sums every vertex except the last one.

use super::{LatticeBox, LatticeSpec, WeightField, DEFAULT_VERTEX_BUDGET};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::stats::WeightDistribution;

#[derive(Clone, Copy, Debug)]
enum Kernel {
    /// Maximal vertex-weight path.
    Last,
    /// Minimal vertex-weight path (zero-temperature polymer).
    VertexMin,
    /// `log sum exp(-beta T(path))`.
    Polymer { beta: f64 },
    /// Minimal edge-weight path.
    EdgeMin,
}

fn check_directed(from: &[i64], to: &[i64], d: usize) -> Result<()> {
    if from.len() != d || to.len() != d {
        return Err(Error::Domain(format!(
            "endpoints must have {d} coordinates"
        )));
    }
    if from.iter().zip(to).any(|(a, b)| a > b) {
        return Err(Error::Domain(format!(
            "directed endpoints need from <= to coordinatewise, got {from:?} -> {to:?}"
        )));
    }
    Ok(())
}

#[inline]
fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Generic DP over `[from, to]`, returning the value at each target.
fn directed_dp(
    field: &WeightField,
    kernel: Kernel,
    from: &[i64],
    to: &[i64],
    targets: &[Vec<i64>],
    budget: usize,
) -> Result<Vec<f64>> {
    let d = field.dim();
    check_directed(from, to, d)?;
    let bx = LatticeBox::new(from.to_vec(), to.to_vec(), budget)?;
    let mut target_slots: Vec<(usize, usize)> = Vec::with_capacity(targets.len());
    for (slot, t) in targets.iter().enumerate() {
        if !bx.contains(t) {
            return Err(Error::Domain(format!(
                "target {t:?} lies outside [{from:?}, {to:?}]"
            )));
        }
        target_slots.push((bx.index(t), slot));
    }
    target_slots.sort_unstable();
    let mut out = vec![0.0; targets.len()];

    // For vertex kernels `acc[v]` is the value leaving v (arrival plus its own
    // weight); for the edge kernel it is the arrival value itself.
    let mut acc = vec![0.0f64; bx.len];
    let mut c = from.to_vec();
    let mut next_target = 0;
    for idx in 0..bx.len {
        let arrival = if idx == 0 {
            0.0
        } else {
            let mut best = match kernel {
                Kernel::Last => f64::NEG_INFINITY,
                Kernel::Polymer { .. } => f64::NEG_INFINITY,
                Kernel::VertexMin | Kernel::EdgeMin => f64::INFINITY,
            };
            for a in 0..d {
                if c[a] == from[a] {
                    continue;
                }
                let p = acc[idx - bx.strides[a]];
                best = match kernel {
                    Kernel::Last => best.max(p),
                    Kernel::VertexMin => best.min(p),
                    Kernel::Polymer { .. } => log_add_exp(best, p),
                    Kernel::EdgeMin => {
                        c[a] -= 1;
                        let w = field.edge(&c, a);
                        c[a] += 1;
                        best.min(p + w)
                    }
                };
            }
            best
        };
        while next_target < target_slots.len() && target_slots[next_target].0 == idx {
            out[target_slots[next_target].1] = arrival;
            next_target += 1;
        }
        acc[idx] = match kernel {
            Kernel::Last | Kernel::VertexMin => arrival + field.vertex(&c),
            Kernel::Polymer { beta } => arrival - beta * field.vertex(&c),
            Kernel::EdgeMin => arrival,
        };
        // Odometer increment in row-major order.
        for a in (0..d).rev() {
            if c[a] < to[a] {
                c[a] += 1;
                break;
            }
            c[a] = from[a];
        }
    }
    Ok(out)
}

/// Two-dimensional last passage with a rolling row; same values as the
/// generic DP with `O(width)` memory.
fn lpp_2d(
    field: &WeightField,
    from: &[i64],
    to: &[i64],
    targets: &[Vec<i64>],
    budget: usize,
) -> Result<Vec<f64>> {
    check_directed(from, to, 2)?;
    LatticeBox::new(from.to_vec(), to.to_vec(), budget)?;
    for t in targets {
        if t.len() != 2 || t[0] < from[0] || t[1] < from[1] || t[0] > to[0] || t[1] > to[1] {
            return Err(Error::Domain(format!(
                "target {t:?} lies outside [{from:?}, {to:?}]"
            )));
        }
    }
    let width = (to[1] - from[1] + 1) as usize;
    let mut row = vec![0.0f64; width];
    let mut out = vec![0.0; targets.len()];
    let mut by_row: Vec<(i64, i64, usize)> = targets
        .iter()
        .enumerate()
        .map(|(slot, t)| (t[0], t[1], slot))
        .collect();
    by_row.sort_unstable();
    let mut next = 0;
    for i in from[0]..=to[0] {
        let first_row = i == from[0];
        let mut left = f64::NEG_INFINITY;
        for (jj, cell) in row.iter_mut().enumerate() {
            let j = from[1] + jj as i64;
            let up = if first_row { f64::NEG_INFINITY } else { *cell };
            let arrival = if first_row && jj == 0 {
                0.0
            } else {
                up.max(left)
            };
            while next < by_row.len() && by_row[next].0 == i && by_row[next].1 == j {
                out[by_row[next].2] = arrival;
                next += 1;
            }
            let leave = arrival + field.vertex2(i, j);
            *cell = leave;
            left = leave;
        }
    }
    Ok(out)
}

fn lpp_targets(
    field: &WeightField,
    from: &[i64],
    to: &[i64],
    targets: &[Vec<i64>],
    budget: usize,
) -> Result<Vec<f64>> {
    if field.dim() == 2 {
        lpp_2d(field, from, to, targets, budget)
    } else {
        directed_dp(field, Kernel::Last, from, to, targets, budget)
    }
}

/// Last-passage time `T(from, to)`: maximal directed path, vertex weights,
/// last vertex omitted.
pub fn lpp_on_field(field: &WeightField, from: &[i64], to: &[i64]) -> Result<f64> {
    Ok(lpp_targets(field, from, to, &[to.to_vec()], DEFAULT_VERTEX_BUDGET)?[0])
}

/// Directed first-passage time over edge weights.
pub fn directed_fpp_on_field(field: &WeightField, from: &[i64], to: &[i64]) -> Result<f64> {
    Ok(directed_dp(
        field,
        Kernel::EdgeMin,
        from,
        to,
        &[to.to_vec()],
        DEFAULT_VERTEX_BUDGET,
    )?[0])
}

/// Minimal directed vertex-weight path, the zero-temperature limit of the
/// polymer energy.
pub fn directed_vertex_min_on_field(field: &WeightField, from: &[i64], to: &[i64]) -> Result<f64> {
    Ok(directed_dp(
        field,
        Kernel::VertexMin,
        from,
        to,
        &[to.to_vec()],
        DEFAULT_VERTEX_BUDGET,
    )?[0])
}

/// Polymer free energy `F = -(1/beta) log(Z / d^|to - from|_1)`.
pub fn polymer_on_field(field: &WeightField, beta: f64, from: &[i64], to: &[i64]) -> Result<f64> {
    polymer_between(field, beta, from, to, DEFAULT_VERTEX_BUDGET)
}

fn polymer_between(
    field: &WeightField,
    beta: f64,
    from: &[i64],
    to: &[i64],
    budget: usize,
) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::config("beta", format!("must be > 0, got {beta}")));
    }
    let log_z = directed_dp(
        field,
        Kernel::Polymer { beta },
        from,
        to,
        &[to.to_vec()],
        budget,
    )?[0];
    let l1: i64 = from.iter().zip(to).map(|(a, b)| b - a).sum();
    let d = field.dim() as f64;
    Ok(-(log_z - l1 as f64 * d.ln()) / beta)
}

fn directed_field(
    spec: &LatticeSpec,
    dist: &WeightDistribution,
    stream: &RngStream,
) -> Result<WeightField> {
    spec.validate_directed()?;
    WeightField::new(dist, stream, spec.d)
}

/// `T(0, n x)` for last passage.
pub fn lpp_passage_time(
    spec: &LatticeSpec,
    n: u64,
    dist: &WeightDistribution,
    stream: &RngStream,
) -> Result<f64> {
    Ok(lpp_passage_times(spec, &[n], dist, stream)?[0])
}

/// `T(0, n x)` for every `n` in `n_list`, from one DP over `[0, n_max x]`.
pub fn lpp_passage_times(
    spec: &LatticeSpec,
    n_list: &[u64],
    dist: &WeightDistribution,
    stream: &RngStream,
) -> Result<Vec<f64>> {
    let field = directed_field(spec, dist, stream)?;
    let n_max = *n_list
        .iter()
        .max()
        .ok_or_else(|| Error::config("n_list", "must be nonempty"))?;
    let targets: Vec<Vec<i64>> = n_list.iter().map(|&n| spec.scaled(n)).collect();
    lpp_targets(
        &field,
        &vec![0; spec.d],
        &spec.scaled(n_max),
        &targets,
        spec.vertex_budget,
    )
}

pub fn lpp_block_increments(
    spec: &LatticeSpec,
    n: u64,
    k: usize,
    dist: &WeightDistribution,
    stream: &RngStream,
) -> Result<Vec<f64>> {
    let field = directed_field(spec, dist, stream)?;
    (1..=k as u64)
        .map(|i| {
            let to = spec.scaled(i * n);
            lpp_targets(
                &field,
                &spec.scaled((i - 1) * n),
                &to,
                std::slice::from_ref(&to),
                spec.vertex_budget,
            )
            .map(|v| v[0])
        })
        .collect()
}

pub fn directed_fpp_passage_time(
    spec: &LatticeSpec,
    n: u64,
    dist: &WeightDistribution,
    stream: &RngStream,
) -> Result<f64> {
    let field = directed_field(spec, dist, stream)?;
    let to = spec.scaled(n);
    Ok(directed_dp(
        &field,
        Kernel::EdgeMin,
        &vec![0; spec.d],
        &to,
        std::slice::from_ref(&to),
        spec.vertex_budget,
    )?[0])
}

/// `T(0, n x)` for every `n` in `n_list` from one min-DP.
pub fn directed_fpp_passage_times(
    spec: &LatticeSpec,
    n_list: &[u64],
    dist: &WeightDistribution,
    stream: &RngStream,
) -> Result<Vec<f64>> {
    let field = directed_field(spec, dist, stream)?;
    let n_max = *n_list
        .iter()
        .max()
        .ok_or_else(|| Error::config("n_list", "must be nonempty"))?;
    let targets: Vec<Vec<i64>> = n_list.iter().map(|&n| spec.scaled(n)).collect();
    directed_dp(
        &field,
        Kernel::EdgeMin,
        &vec![0; spec.d],
        &spec.scaled(n_max),
        &targets,
        spec.vertex_budget,
    )
}

pub fn directed_fpp_block_increments(
    spec: &LatticeSpec,
    n: u64,
    k: usize,
    dist: &WeightDistribution,
    stream: &RngStream,
) -> Result<Vec<f64>> {
    let field = directed_field(spec, dist, stream)?;
    (1..=k as u64)
        .map(|i| {
            let to = spec.scaled(i * n);
            directed_dp(
                &field,
                Kernel::EdgeMin,
                &spec.scaled((i - 1) * n),
                &to,
                std::slice::from_ref(&to),
                spec.vertex_budget,
            )
            .map(|v| v[0])
        })
        .collect()
}

/// `F(0, n x)` at inverse temperature `beta`.
pub fn polymer_free_energy(
    beta: f64,
    spec: &LatticeSpec,
    n: u64,
    dist: &WeightDistribution,
    stream: &RngStream,
) -> Result<f64> {
    let field = directed_field(spec, dist, stream)?;
    polymer_between(
        &field,
        beta,
        &vec![0; spec.d],
        &spec.scaled(n),
        spec.vertex_budget,
    )
}

/// `F(0, n x)` for every `n` in `n_list` from one log-domain DP.
pub fn polymer_free_energies(
    beta: f64,
    spec: &LatticeSpec,
    n_list: &[u64],
    dist: &WeightDistribution,
    stream: &RngStream,
) -> Result<Vec<f64>> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::config("beta", format!("must be > 0, got {beta}")));
    }
    let field = directed_field(spec, dist, stream)?;
    let n_max = *n_list
        .iter()
        .max()
        .ok_or_else(|| Error::config("n_list", "must be nonempty"))?;
    let targets: Vec<Vec<i64>> = n_list.iter().map(|&n| spec.scaled(n)).collect();
    let log_z = directed_dp(
        &field,
        Kernel::Polymer { beta },
        &vec![0; spec.d],
        &spec.scaled(n_max),
        &targets,
        spec.vertex_budget,
    )?;
    let ln_d = (spec.d as f64).ln();
    Ok(log_z
        .iter()
        .zip(&targets)
        .map(|(lz, t)| {
            let l1: i64 = t.iter().sum();
            -(lz - l1 as f64 * ln_d) / beta
        })
        .collect())
}

pub fn polymer_block_increments(
    beta: f64,
    spec: &LatticeSpec,
    n: u64,
    k: usize,
    dist: &WeightDistribution,
    stream: &RngStream,
) -> Result<Vec<f64>> {
    let field = directed_field(spec, dist, stream)?;
    (1..=k as u64)
        .map(|i| {
            polymer_between(
                &field,
                beta,
                &spec.scaled((i - 1) * n),
                &spec.scaled(i * n),
                spec.vertex_budget,
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::FppField;

    fn exp1() -> WeightDistribution {
        WeightDistribution::Exponential { rate: 1.0 }
    }

    /// All monotone lattice paths from (0,0) to (a,b), as vertex lists.
    fn all_paths(a: i64, b: i64) -> Vec<Vec<(i64, i64)>> {
        fn rec(
            cur: (i64, i64),
            a: i64,
            b: i64,
            path: &mut Vec<(i64, i64)>,
            out: &mut Vec<Vec<(i64, i64)>>,
        ) {
            if cur == (a, b) {
                out.push(path.clone());
                return;
            }
            for step in [(1, 0), (0, 1)] {
                let nb = (cur.0 + step.0, cur.1 + step.1);
                if nb.0 <= a && nb.1 <= b {
                    path.push(nb);
                    rec(nb, a, b, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec((0, 0), a, b, &mut vec![(0, 0)], &mut out);
        out
    }

    fn vertex_sum(field: &WeightField, path: &[(i64, i64)]) -> f64 {
        path[..path.len() - 1]
            .iter()
            .fold(0.0, |acc, v| acc + field.vertex(&[v.0, v.1]))
    }

    fn edge_sum(field: &WeightField, path: &[(i64, i64)]) -> f64 {
        path.windows(2).fold(0.0, |acc, w| {
            let axis = if w[1].0 != w[0].0 { 0 } else { 1 };
            acc + field.edge(&[w[0].0, w[0].1], axis)
        })
    }

    #[test]
    fn path_count_is_binomial() {
        assert_eq!(all_paths(3, 3).len(), 20);
    }

    #[test]
    fn dp_matches_enumeration_at_3_3() {
        let paths = all_paths(3, 3);
        for seed in 0..100 {
            let s = RngStream::new(seed, 1);
            let uni = WeightField::new(&WeightDistribution::Uniform01, &s, 2).unwrap();
            let lpp = lpp_on_field(&uni, &[0, 0], &[3, 3]).unwrap();
            let generic =
                directed_dp(&uni, Kernel::Last, &[0, 0], &[3, 3], &[vec![3, 3]], 100).unwrap()[0];
            let oracle = paths
                .iter()
                .map(|p| vertex_sum(&uni, p))
                .fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(lpp, oracle, "seed {seed}");
            assert_eq!(generic, oracle, "seed {seed}");

            let ex = WeightField::new(&exp1(), &s, 2).unwrap();
            let dfpp = directed_fpp_on_field(&ex, &[0, 0], &[3, 3]).unwrap();
            let oracle = paths
                .iter()
                .map(|p| edge_sum(&ex, p))
                .fold(f64::INFINITY, f64::min);
            assert_eq!(dfpp, oracle, "seed {seed}");

            let beta = 0.7;
            let f = polymer_on_field(&ex, beta, &[0, 0], &[3, 3]).unwrap();
            let z: f64 = paths
                .iter()
                .map(|p| (-beta * vertex_sum(&ex, p)).exp())
                .sum();
            let oracle = -(z.ln() - 6.0 * 2f64.ln()) / beta;
            assert!((f - oracle).abs() < 1e-12, "seed {seed}: {f} vs {oracle}");
        }
    }

    #[test]
    fn single_step_path_counts_first_vertex() {
        let spec = LatticeSpec::new(vec![1, 0]).unwrap();
        let s = RngStream::new(5, 0);
        let t = lpp_passage_time(&spec, 1, &exp1(), &s).unwrap();
        let field = WeightField::new(&exp1(), &s, 2).unwrap();
        assert_eq!(t, field.vertex(&[0, 0]));
    }

    #[test]
    fn point_mass_values() {
        let s = RngStream::new(0, 0);
        let one = WeightField::new(&WeightDistribution::PointMass { value: 1.0 }, &s, 2).unwrap();
        assert_eq!(lpp_on_field(&one, &[0, 0], &[4, 7]).unwrap(), 11.0);
        let c = WeightField::new(&WeightDistribution::PointMass { value: 2.0 }, &s, 2).unwrap();
        assert_eq!(directed_fpp_on_field(&c, &[0, 0], &[4, 7]).unwrap(), 22.0);
    }

    #[test]
    fn polymer_entropy_only() {
        let s = RngStream::new(0, 0);
        let zero = WeightField::new(&WeightDistribution::PointMass { value: 0.0 }, &s, 2).unwrap();
        let beta = 1.5;
        let f = polymer_on_field(&zero, beta, &[0, 0], &[9, 0]).unwrap();
        assert!((f - 9.0 * 2f64.ln() / beta).abs() < 1e-12);
        let (a, b) = (4.0f64, 3.0f64);
        let f = polymer_on_field(&zero, beta, &[0, 0], &[4, 3]).unwrap();
        let paths = 35.0f64; // C(7, 3)
        let expected = -(paths / 2f64.powf(a + b)).ln() / beta;
        assert!((f - expected).abs() < 1e-12);
    }

    #[test]
    fn polymer_zero_temperature_limit() {
        let s = RngStream::new(77, 0);
        let field = WeightField::new(&WeightDistribution::Uniform01, &s, 2).unwrap();
        let to = [4, 4];
        let ground = directed_vertex_min_on_field(&field, &[0, 0], &to).unwrap();
        let log_paths = 70f64.ln(); // C(8, 4)
        let mut prev = f64::INFINITY;
        for beta in [1.0, 10.0, 100.0] {
            let f = polymer_on_field(&field, beta, &[0, 0], &to).unwrap();
            let energy = f - 8.0 * 2f64.ln() / beta;
            let gap = energy - ground;
            assert!(
                gap <= 1e-12 && gap >= -log_paths / beta - 1e-12,
                "beta {beta}: gap {gap}"
            );
            assert!(gap.abs() < prev);
            prev = gap.abs();
        }
    }

    #[test]
    fn generic_and_rolling_lpp_agree() {
        let spec = LatticeSpec::new(vec![2, 1]).unwrap();
        for seed in 0..10 {
            let s = RngStream::new(seed, 0);
            let field = WeightField::new(&exp1(), &s, 2).unwrap();
            let targets: Vec<Vec<i64>> = (1..=6).map(|n| spec.scaled(n)).collect();
            let a = lpp_2d(&field, &[0, 0], &[12, 6], &targets, 1000).unwrap();
            let b = directed_dp(&field, Kernel::Last, &[0, 0], &[12, 6], &targets, 1000).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn multi_target_runs_match_single_runs() {
        let spec = LatticeSpec::new(vec![1, 2]).unwrap();
        let s = RngStream::new(21, 0);
        let ns = [1u64, 3, 5];
        let dfpp = directed_fpp_passage_times(&spec, &ns, &exp1(), &s).unwrap();
        let poly = polymer_free_energies(0.9, &spec, &ns, &exp1(), &s).unwrap();
        for (i, &n) in ns.iter().enumerate() {
            assert_eq!(
                dfpp[i],
                directed_fpp_passage_time(&spec, n, &exp1(), &s).unwrap()
            );
            let single = polymer_free_energy(0.9, &spec, n, &exp1(), &s).unwrap();
            assert!((poly[i] - single).abs() < 1e-12);
        }
    }

    #[test]
    fn three_dimensional_lpp_point_mass() {
        let spec = LatticeSpec::new(vec![1, 2, 1]).unwrap();
        let t = lpp_passage_time(
            &spec,
            3,
            &WeightDistribution::PointMass { value: 1.0 },
            &RngStream::new(0, 0),
        )
        .unwrap();
        assert_eq!(t, 12.0);
    }

    #[test]
    fn super_and_sub_additivity_on_shared_field() {
        let spec = LatticeSpec::new(vec![1, 1]).unwrap();
        let n = 8;
        for seed in 0..50 {
            let s = RngStream::new(seed, 2);
            let whole = lpp_passage_time(&spec, 2 * n, &exp1(), &s).unwrap();
            let b = lpp_block_increments(&spec, n, 2, &exp1(), &s).unwrap();
            assert!(whole >= (b[0] + b[1]) * (1.0 - 1e-12));

            let geo = WeightDistribution::Geometric { p: 0.5 };
            let whole = lpp_passage_time(&spec, 2 * n, &geo, &s).unwrap();
            let b = lpp_block_increments(&spec, n, 2, &geo, &s).unwrap();
            assert!(whole >= b[0] + b[1]);

            let whole = directed_fpp_passage_time(&spec, 2 * n, &exp1(), &s).unwrap();
            let b = directed_fpp_block_increments(&spec, n, 2, &exp1(), &s).unwrap();
            assert!(whole <= (b[0] + b[1]) * (1.0 + 1e-12));

            let whole = polymer_free_energy(0.8, &spec, 2 * n, &exp1(), &s).unwrap();
            let b = polymer_block_increments(0.8, &spec, n, 2, &exp1(), &s).unwrap();
            assert!(whole <= b[0] + b[1] + 1e-10);
        }
    }

    #[test]
    fn directed_dominates_undirected() {
        for seed in 0..50 {
            let s = RngStream::new(seed, 4);
            let fpp = FppField::in_box(&exp1(), &s, vec![-3, -3], vec![9, 9], 10_000).unwrap();
            let undirected = fpp.passage_time(&[0, 0], &[6, 5]).unwrap();
            let directed = directed_fpp_on_field(fpp.field(), &[0, 0], &[6, 5]).unwrap();
            assert!(directed >= undirected);
        }
    }

    #[test]
    fn monotone_coupling() {
        for seed in 0..20 {
            let s = RngStream::new(seed, 9);
            let base = WeightField::new(&exp1(), &s, 2).unwrap();
            let up = base.clone().shifted(0.3).unwrap();
            assert!(
                lpp_on_field(&up, &[0, 0], &[6, 6]).unwrap()
                    >= lpp_on_field(&base, &[0, 0], &[6, 6]).unwrap()
            );
            assert!(
                directed_fpp_on_field(&up, &[0, 0], &[6, 6]).unwrap()
                    >= directed_fpp_on_field(&base, &[0, 0], &[6, 6]).unwrap()
            );
        }
    }

    #[test]
    fn lpp_dominates_straight_path() {
        for seed in 0..20 {
            let s = RngStream::new(seed, 0);
            let field = WeightField::new(&exp1(), &s, 2).unwrap();
            let t = lpp_on_field(&field, &[0, 0], &[5, 5]).unwrap();
            let staircase: Vec<(i64, i64)> = (0..=5)
                .map(|i| (i, 0))
                .chain((1..=5).map(|j| (5, j)))
                .collect();
            assert!(t >= vertex_sum(&field, &staircase));
        }
    }

    #[test]
    fn rejects_negative_direction_and_reversed_endpoints() {
        let spec = LatticeSpec::new(vec![1, -1]).unwrap();
        assert!(lpp_passage_time(&spec, 3, &exp1(), &RngStream::new(0, 0)).is_err());
        let field = WeightField::new(&exp1(), &RngStream::new(0, 0), 2).unwrap();
        assert!(lpp_on_field(&field, &[2, 2], &[1, 3]).is_err());
    }
}
