//! Searches for countermodels to two modal forms of modus tollens: the
//! valid one with a boxed premise and the invalid one without.
use modalkit::parse;
use modalkit::search::{find_countermodel, recheck, SearchOptions, SearchSpec};

fn main() -> modalkit::Result<()> {
    for text in ["[](P => Q) => ([]~Q => []~P)", "(P => Q) => ([]~Q => []~P)"] {
        let spec = SearchSpec::new(parse(text)?);
        match find_countermodel(&spec, &SearchOptions::default())? {
            Some(cm) => {
                recheck(&spec, &cm).expect("certificate rechecks");
                println!(
                    "{text}: countermodel with {} worlds\n{}",
                    cm.worlds(),
                    cm.certificate_text(&spec)
                );
            }
            None => println!("{text}: no countermodel up to {} worlds", spec.max_worlds),
        }
    }
    Ok(())
}
