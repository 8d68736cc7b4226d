//! Build a Kalmanson matrix from explicit parameters, then generate a
//! scrambled one and recover its hidden order.
//!
//!     cargo run --example kalmanson_generator -- 8 42

use tworoute::generator::{build_kalmanson, generate_kalmanson, GeneratorParams, KalmansonRecipe};
use tworoute::matrices::{check_kalmanson, write_matrix};

fn main() -> tworoute::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(8);
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(42);

    let recipe = KalmansonRecipe {
        first_row: vec![3., 1., 3., 0.],
        second_last: 2.,
        betas: vec![1., 1.],
        alphas: vec![2., 3., 1.],
    };
    let built = build_kalmanson(&recipe)?;
    println!("hand-made 5x5 matrix after the shift:");
    write_matrix(&mut std::io::stdout(), &built.shifted)?;
    println!("kalmanson: {}\n", check_kalmanson(&built.shifted, false).holds);

    let g = generate_kalmanson(&GeneratorParams::new(n, seed))?;
    let check = check_kalmanson(&g.matrix, false);
    match check.witness {
        Some(w) => println!("scrambled {n}x{n} matrix breaks the conditions: {w}"),
        None => println!("scrambled {n}x{n} matrix happens to be Kalmanson already"),
    }
    let restored = g.matrix.permute(&g.hidden_order)?;
    println!("hidden order {:?}", g.hidden_order.labels());
    println!("restored matrix is strongly Kalmanson: {}", check_kalmanson(&restored, true).holds);
    Ok(())
}
