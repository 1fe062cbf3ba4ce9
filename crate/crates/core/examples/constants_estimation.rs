//! Sampled constants for every catalog model, then a validation pass of a
//! hand-written bundle that is deliberately too optimistic.

use qcert::problem::{
    estimate_constants, make_coefficient, validate_constants, ConstantsBundle, Params, SamplingBox,
    CATALOG,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sampling = SamplingBox {
        samples: 20_000,
        ..SamplingBox::default()
    };
    println!("{:<15} {:>9} {:>9} {:>9} {:>9} {:>9}", "model", "gamma_a", "lambda0", "lambda1", "c_f", "c_g");
    for name in CATALOG {
        let mut params = Params::new();
        if *name != "constant" {
            params.insert("a0".into(), 1.0);
        }
        let model = make_coefficient(name, &params)?;
        let b = estimate_constants(&model, &sampling)?.bundle;
        println!(
            "{name:<15} {:9.4} {:9.4} {:9.4} {:9.4} {:9.4}",
            b.gamma_a, b.lambda0, b.lambda1, b.c_f, b.c_g
        );
    }

    let mut params = Params::new();
    params.insert("a0".into(), 1.0);
    let model = make_coefficient("arctan", &params)?;
    let bundle = ConstantsBundle {
        lambda1: 1.0,
        c_f: 0.1,
        ..ConstantsBundle::basic(1.0, 0.0, 0.0)
    };
    let report = validate_constants(&model, &bundle, &sampling);
    println!("\nvalidation of an optimistic arctan bundle: passed = {}", report.passed());
    for v in &report.violations {
        println!("  {} claimed {} observed {:.4} at s = {:.3e}", v.constant, v.claimed, v.observed, v.s);
    }
    Ok(())
}
