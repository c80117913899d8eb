//! From <>g and the scheme P => []P, conclude g. Searches for a
//! countermodel with and without each ingredient.
use modalkit::search::{find_countermodel, FrameConstraint, SearchOptions, SearchSpec};
use modalkit::{parse, Formula};

fn run(label: &str, spec: &SearchSpec) -> modalkit::Result<()> {
    let opts = SearchOptions {
        jobs: 4,
        ..SearchOptions::default()
    };
    match find_countermodel(spec, &opts)? {
        Some(cm) => println!("{label}: countermodel with {} worlds", cm.worlds()),
        None => println!("{label}: no countermodel up to {} worlds", spec.max_worlds),
    }
    Ok(())
}

fn main() -> modalkit::Result<()> {
    let f = |s: &str| -> modalkit::Result<Formula> { Ok(parse(s)?) };
    let full = SearchSpec {
        max_worlds: 3,
        premise_formulas: vec![f("<>g")?],
        premise_schemes: vec![f("P => []P")?],
        constraints: vec![FrameConstraint::Symmetric],
        ..SearchSpec::new(f("g")?)
    };
    run("symmetric, both premises", &full)?;
    run(
        "any frame, both premises",
        &SearchSpec {
            constraints: vec![],
            max_worlds: 4,
            ..full.clone()
        },
    )?;
    run(
        "without <>g",
        &SearchSpec {
            premise_formulas: vec![],
            ..full.clone()
        },
    )?;
    run(
        "without the scheme",
        &SearchSpec {
            premise_schemes: vec![],
            ..full
        },
    )?;
    Ok(())
}
