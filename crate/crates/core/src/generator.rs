//! Seeded generator of (permuted) Kalmanson matrices and of balanced 2TSP
//! instances with a known optimum.
//!
//! A Kalmanson matrix is determined by its first row, the entry `c[1][n-1]`
//! and the nonnegative quantities `alpha` / `beta` of the adjacent-index
//! characterisation (see [`crate::matrices::kalmanson_alphas`]). The
//! generator draws those numbers, then rebuilds the matrix column by column:
//!
//! 1. first row and `c[1][n-1]` are drawn;
//! 2. the last column is filled downwards from the betas;
//! 3. the interior is filled row by row, right to left, from the alphas;
//! 4. if anything is negative, the most negative off-diagonal entry is
//!    subtracted from every off-diagonal entry (alphas and betas are unchanged);
//! 5. optionally rows and columns are scrambled by a random permutation.
//!
//! Random draws follow a fixed stream order on a PCG-64 generator: first-row
//! entries, `c[1][n-1]`, betas by index, alphas row-major, the scrambling
//! permutation (Fisher–Yates), and finally the fixed-node subset.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;

use crate::matrices::{Permutation, RealMatrix, SymmetricCostMatrix};
use crate::two_tsp::{solve_balanced_2tsp, Balance, TwoTspInstance};
use crate::{Error, Result};

/// The RNG used by every seeded component of the crate.
pub type SeededRng = Pcg64;

pub fn seeded_rng(seed: u64) -> SeededRng {
    Pcg64::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorParams {
    pub n: usize,
    /// Interval for first-row entries, `c[1][n-1]`, alphas and betas.
    pub value_range: (f64, f64),
    pub seed: u64,
    pub permute_output: bool,
    /// Require strictly positive alphas and betas.
    pub strong: bool,
}

impl GeneratorParams {
    /// Defaults used for the benchmark families: values in `[0.1, 1.1]`,
    /// strong, scrambled.
    pub fn new(n: usize, seed: u64) -> Self {
        GeneratorParams { n, value_range: (0.1, 1.1), seed, permute_output: true, strong: true }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.value_range;
        if self.n < 4 {
            return Err(Error::InvalidParams(format!("n = {} must be at least 4", self.n)));
        }
        if !(lo.is_finite() && hi.is_finite()) || hi < lo {
            return Err(Error::InvalidParams(format!("bad value range [{lo}, {hi}]")));
        }
        if self.strong && lo <= 0.0 {
            return Err(Error::InvalidParams("strong generation needs a positive lower bound".into()));
        }
        if lo < 0.0 {
            return Err(Error::InvalidParams("value range must be nonnegative".into()));
        }
        Ok(())
    }
}

/// The numbers that pin down a Kalmanson matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct KalmansonRecipe {
    /// `c[0][1..n]`.
    pub first_row: Vec<f64>,
    /// `c[1][n-1]`.
    pub second_last: f64,
    /// `beta[i]` for `i = 1..=n-3`, in index order.
    pub betas: Vec<f64>,
    /// `alpha[i][j]` for `0 <= i <= n-4`, `i+2 <= j <= n-2`, row-major.
    pub alphas: Vec<f64>,
}

impl KalmansonRecipe {
    pub fn order(&self) -> usize {
        self.first_row.len() + 1
    }

    fn draw<R: Rng>(n: usize, (lo, hi): (f64, f64), rng: &mut R) -> Self {
        let mut sample = |count: usize| -> Vec<f64> {
            (0..count).map(|_| rng.gen_range(lo..=hi)).collect()
        };
        let first_row = sample(n - 1);
        let second_last = sample(1)[0];
        let betas = sample(n - 3);
        let alphas = sample((n - 3) * (n - 2) / 2);
        KalmansonRecipe { first_row, second_last, betas, alphas }
    }

    fn validate(&self) -> Result<()> {
        let n = self.order();
        if n < 4 {
            return Err(Error::InvalidParams("recipe order must be at least 4".into()));
        }
        if self.betas.len() != n - 3 || self.alphas.len() != (n - 3) * (n - 2) / 2 {
            return Err(Error::InvalidParams(format!(
                "order {n} needs {} betas and {} alphas",
                n - 3,
                (n - 3) * (n - 2) / 2
            )));
        }
        Ok(())
    }

    fn alpha(&self, i: usize, j: usize) -> f64 {
        let n = self.order();
        let row_start: usize = (0..i).map(|t| n - 3 - t).sum();
        self.alphas[row_start + j - i - 2]
    }
}

/// Intermediate matrices of the construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    /// After filling the last column: `None` marks entries not yet defined.
    pub border: Vec<Vec<Option<f64>>>,
    /// After the interior fill, before the shift (may hold negatives).
    pub raw: RealMatrix,
    /// Nonnegative result.
    pub shifted: SymmetricCostMatrix,
}

/// Runs the deterministic part of the construction on a recipe.
pub fn build_kalmanson(recipe: &KalmansonRecipe) -> Result<Construction> {
    recipe.validate()?;
    let n = recipe.order();
    let last = n - 1;
    let mut c = RealMatrix::zeros(n);
    let mut defined = vec![vec![false; n]; n];
    let mut mark = |c: &mut RealMatrix, i: usize, j: usize, v: f64| {
        c.set_sym(i, j, v);
        defined[i][j] = true;
        defined[j][i] = true;
    };
    for i in 0..n {
        mark(&mut c, i, i, 0.0);
    }
    for (k, &v) in recipe.first_row.iter().enumerate() {
        mark(&mut c, 0, k + 1, v);
    }
    mark(&mut c, 1, last, recipe.second_last);
    for i in 2..last {
        let v = c.get(i, 0) + c.get(i - 1, last) - c.get(i - 1, 0) - recipe.betas[i - 2];
        mark(&mut c, i, last, v);
    }
    let border = (0..n)
        .map(|i| (0..n).map(|j| defined[i][j].then(|| c.get(i, j))).collect())
        .collect();

    for i in 1..n - 2 {
        for j in (i + 1..last).rev() {
            let v = c.get(i - 1, j) + c.get(i, j + 1) - c.get(i - 1, j + 1) - recipe.alpha(i - 1, j);
            c.set_sym(i, j, v);
        }
    }
    let raw = c.clone();

    let most_negative = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| c.get(i, j))
        .fold(0.0_f64, f64::min);
    let shifted = SymmetricCostMatrix::from_fn(n, |i, j| c.get(i, j) - most_negative)?;
    Ok(Construction { border, raw, shifted })
}

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    /// The (possibly scrambled) output matrix.
    pub matrix: SymmetricCostMatrix,
    /// The Kalmanson matrix before scrambling.
    pub kalmanson: SymmetricCostMatrix,
    /// Scrambling permutation: `matrix = kalmanson.permute(scramble)`.
    pub scramble: Permutation,
    /// Cyclic order that maps `matrix` back to a Kalmanson matrix, rotated
    /// to start at node 0: `matrix.permute(hidden_order)` is Kalmanson.
    pub hidden_order: Permutation,
    pub recipe: KalmansonRecipe,
}

pub fn generate_kalmanson(params: &GeneratorParams) -> Result<GeneratedInstance> {
    generate_kalmanson_with(params, &mut seeded_rng(params.seed))
}

pub fn generate_kalmanson_with<R: Rng>(
    params: &GeneratorParams,
    rng: &mut R,
) -> Result<GeneratedInstance> {
    params.validate()?;
    let n = params.n;
    let recipe = KalmansonRecipe::draw(n, params.value_range, rng);
    let kalmanson = build_kalmanson(&recipe)?.shifted;
    let scramble = if params.permute_output {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(rng);
        Permutation::new(v)?
    } else {
        Permutation::identity(n)
    };
    let matrix = kalmanson.permute(&scramble)?;
    let hidden_order = scramble.inverse().rotated_to(0);
    Ok(GeneratedInstance { matrix, kalmanson, scramble, hidden_order, recipe })
}

/// A balanced 2TSP instance together with its optimal total length.
#[derive(Debug, Clone)]
pub struct Generated2Tsp {
    pub instance: TwoTspInstance,
    pub optimum: f64,
    pub generated: GeneratedInstance,
}

/// Builds a Kalmanson matrix, picks `fixed_count` fixed nodes (always
/// including node 0, which heads the hidden order) and solves the instance
/// exactly in the hidden order.
pub fn generate_2tsp_instance(
    params: &GeneratorParams,
    fixed_count: usize,
    balance: Balance,
) -> Result<Generated2Tsp> {
    let n = params.n;
    if fixed_count == 0 || fixed_count > n {
        return Err(Error::InvalidParams(format!("fixed count {fixed_count} outside 1..={n}")));
    }
    if (n + fixed_count) % 2 == 1 && balance == Balance::Exact {
        return Err(Error::InvalidParams(format!(
            "n + |S| = {} is odd; enable near-balanced mode to allow it",
            n + fixed_count
        )));
    }
    let mut rng = seeded_rng(params.seed);
    let generated = generate_kalmanson_with(params, &mut rng)?;
    let mut others: Vec<usize> = (1..n).collect();
    let (chosen, _) = others.partial_shuffle(&mut rng, fixed_count - 1);
    let mut fixed: Vec<usize> = std::iter::once(0).chain(chosen.iter().copied()).collect();
    fixed.sort_unstable();

    let instance = TwoTspInstance::with_balance(generated.matrix.clone(), &fixed, balance)?;
    let ordered = instance.relabel(&generated.hidden_order)?;
    let optimum = solve_balanced_2tsp(&ordered)?.total;
    Ok(Generated2Tsp { instance, optimum, generated })
}
