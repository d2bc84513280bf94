use crate::error::{Error, Result};
use crate::rng::{KeyedDomain, RngStream};

const SEQ_A_DOMAIN: u64 = 0x4c43_5341;
const SEQ_B_DOMAIN: u64 = 0x4c43_5342;

/// Length of a longest common subsequence.
pub fn lcs_length<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut row = vec![0usize; b.len() + 1];
    for x in a {
        let mut diag = 0;
        for (j, y) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if x == y { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[b.len()]
}

/// Two i.i.d. symbol sequences `X_1, X_2, ...` and `Y_1, Y_2, ...` addressed
/// by index, so every window of one replica reads the same symbols.
#[derive(Clone, Debug)]
pub struct SymbolSource {
    cdf: Vec<f64>,
    a: KeyedDomain,
    b: KeyedDomain,
}

impl SymbolSource {
    /// Uniform symbols when `pmf` is `None`.
    pub fn new(alphabet_size: usize, pmf: Option<&[f64]>, stream: &RngStream) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::config("alphabet_size", "must be >= 1"));
        }
        let weights: Vec<f64> = match pmf {
            None => vec![1.0; alphabet_size],
            Some(p) => {
                if p.len() != alphabet_size {
                    return Err(Error::config(
                        "symbol_pmf",
                        format!(
                            "has {} entries for an alphabet of size {alphabet_size}",
                            p.len()
                        ),
                    ));
                }
                if p.iter().any(|&w| !(w >= 0.0 && w.is_finite())) {
                    return Err(Error::config(
                        "symbol_pmf",
                        "entries must be finite and >= 0",
                    ));
                }
                p.to_vec()
            }
        };
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::config("symbol_pmf", "must have positive mass"));
        }
        if pmf.is_some() && (total - 1.0).abs() > 1e-9 {
            return Err(Error::config(
                "symbol_pmf",
                format!("sums to {total}, expected 1"),
            ));
        }
        let mut acc = 0.0;
        let cdf = weights
            .iter()
            .map(|w| {
                acc += w / total;
                acc
            })
            .collect();
        Ok(SymbolSource {
            cdf,
            a: stream.domain(SEQ_A_DOMAIN),
            b: stream.domain(SEQ_B_DOMAIN),
        })
    }

    fn symbol(&self, u: f64) -> u32 {
        let i = self.cdf.partition_point(|&c| c < u);
        i.min(self.cdf.len() - 1) as u32
    }

    /// `X_i`, 1-based.
    pub fn a(&self, i: u64) -> u32 {
        self.symbol(self.a.open01(i))
    }

    /// `Y_i`, 1-based.
    pub fn b(&self, i: u64) -> u32 {
        self.symbol(self.b.open01(i))
    }

    /// `(X_{m+1..n}, Y_{m+1..n})`.
    pub fn windows(&self, m: u64, n: u64) -> (Vec<u32>, Vec<u32>) {
        (
            (m + 1..=n).map(|i| self.a(i)).collect(),
            (m + 1..=n).map(|i| self.b(i)).collect(),
        )
    }
}

/// LCS of `X_{m+1..n}` and `Y_{m+1..n}` (super-additive, not negated).
pub fn lcs_block(
    m: u64,
    n: u64,
    alphabet_size: usize,
    symbol_pmf: Option<&[f64]>,
    stream: &RngStream,
) -> Result<u64> {
    if m >= n {
        return Err(Error::Domain(format!(
            "lcs block needs m < n, got m = {m}, n = {n}"
        )));
    }
    let src = SymbolSource::new(alphabet_size, symbol_pmf, stream)?;
    let (a, b) = src.windows(m, n);
    Ok(lcs_length(&a, &b) as u64)
}

/// `X_{0,n}` for every `n` in `n_list` from one table over the longest prefix.
pub fn lcs_prefix_values(
    n_list: &[u64],
    alphabet_size: usize,
    symbol_pmf: Option<&[f64]>,
    stream: &RngStream,
) -> Result<Vec<u64>> {
    let src = SymbolSource::new(alphabet_size, symbol_pmf, stream)?;
    let n_max = *n_list
        .iter()
        .max()
        .ok_or_else(|| Error::config("n_list", "must be nonempty"))?;
    if n_list.contains(&0) {
        return Err(Error::Domain("scales must be positive".into()));
    }
    let (a, b) = src.windows(0, n_max);
    let n = n_max as usize;
    // Full table rows are not needed: the value at (i, i) is read when row i
    // is complete.
    let mut row = vec![0u64; n + 1];
    let mut diag_values = vec![0u64; n + 1];
    for i in 1..=n {
        let mut diag = 0;
        for j in 1..=n {
            let up = row[j];
            row[j] = if a[i - 1] == b[j - 1] {
                diag + 1
            } else {
                up.max(row[j - 1])
            };
            diag = up;
        }
        diag_values[i] = row[i];
    }
    Ok(n_list.iter().map(|&k| diag_values[k as usize]).collect())
}
