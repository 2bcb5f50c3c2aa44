//! Exact and ARFIMA fractional Brownian motion, with the Hurst exponent
//! recovered from the log-periodogram.

use std::error::Error;

use paragrade::fracnoise::{
    arfima_coeffs, fbm_generate_exact, fbm_paths_exact, fgn_autocovariance, hurst_estimate, increment_autocovariance,
    FbmConfig,
};

pub fn run() -> Result<(), Box<dyn Error>> {
    let cfg = FbmConfig::new(0.7, 128, 1.0, 5)?;
    let paths = fbm_paths_exact(&cfg, 4000)?;
    let emp = increment_autocovariance(&paths, 3);
    for (k, e) in emp.iter().enumerate() {
        println!("lag {k}: sample {e:.4}, exact {:.4}", fgn_autocovariance(k as i64, 0.7));
    }

    let c = arfima_coeffs(0.7, 1024)?;
    println!("ARFIMA psi ratio at j = 512: {:.5} (limit {:.5})", c.psi[1024] / c.psi[512], 2f64.powf(0.7 - 1.5));
    println!("ARFIMA lag-1 correlation {:.4} vs fGn {:.4}", c.autocovariance(1) / c.autocovariance(0), fgn_autocovariance(1, 0.7));

    for h in [0.3, 0.5, 0.7] {
        let path = fbm_generate_exact(&FbmConfig::new(h, 4096, 1.0, 11)?)?;
        let est = hurst_estimate(&path.values)?;
        println!("H = {h}: estimate {:.3} +- {:.3}", est.hurst, est.std_error);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
