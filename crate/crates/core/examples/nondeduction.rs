//! P entails []P as a rule (validity of P forces validity of []P) but
//! P => []P is not valid. Finds the smallest model showing the gap.
use modalkit::search::{find_countermodel, SearchOptions, SearchSpec};
use modalkit::semantics::{deduction_gap, Reading};
use modalkit::{parse, Budget};

fn main() -> modalkit::Result<()> {
    let conclusion = parse("P => []P")?;
    for reading in [Reading::Meta, Reading::Object, Reading::Deduction] {
        let spec = SearchSpec {
            reading,
            max_worlds: 3,
            ..SearchSpec::new(conclusion.clone())
        };
        let found = find_countermodel(&spec, &SearchOptions::default())?;
        match found {
            Some(cm) => println!("{reading}: refuted with {} worlds", cm.worlds()),
            None => println!("{reading}: no countermodel up to 3 worlds"),
        }
        if reading == Reading::Deduction {
            if let Some(cm) = find_countermodel(&spec, &SearchOptions::default())? {
                let (a, b) = (parse("P")?, parse("[]P")?);
                let gap = deduction_gap(&cm.model, &a, &b, &Budget::default())?;
                println!(
                    "gap confirmed: {}\n{}",
                    !gap.holds,
                    cm.certificate_text(&spec)
                );
            }
        }
    }
    Ok(())
}
