//! Compares readings of BF-style implications on a varying-domain model:
//! the object reading and the rule reading come apart.
use modalkit::search::{find_fo_countermodel, SearchOptions, SearchSpec};
use modalkit::semantics::{implication_readings, split_implication, Reading};
use modalkit::{parse, DomainMode};

fn main() -> modalkit::Result<()> {
    let text = "[](forall x. P(x)) => forall x. []P(x)";
    let conclusion = parse(text)?;
    for reading in [Reading::Object, Reading::Meta, Reading::Deduction] {
        let spec = SearchSpec {
            max_worlds: 2,
            max_domain: 2,
            mode: DomainMode::Varying,
            reading,
            ..SearchSpec::new(conclusion.clone())
        };
        match find_fo_countermodel(&spec, &SearchOptions::default())? {
            Some(cm) => {
                let (a, b) = split_implication(&conclusion).expect("implication");
                let readings = implication_readings(&cm.model, a, b)?;
                println!(
                    "{reading}: countermodel with {} worlds, readings {readings:?}",
                    cm.worlds()
                );
            }
            None => println!("{reading}: none up to 2 worlds and 2 elements"),
        }
    }
    Ok(())
}
