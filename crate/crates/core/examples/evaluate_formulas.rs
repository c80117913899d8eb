//! Loads a small model from JSON and evaluates formulas pointwise and as
//! truth sets.
use modalkit::semantics::{eval, truth_set, valid};
use modalkit::{parse, Env, Model};

const MODEL: &str = r#"{
  "worlds": ["w0", "w1", "w2"],
  "access": [["w0", "w1"], ["w0", "w2"], ["w1", "w1"], ["w2", "w2"]],
  "valuation": {"g": ["w1"], "h": ["w1", "w2"]}
}"#;

fn main() -> modalkit::Result<()> {
    let m = Model::from_json(MODEL)?;
    let frame = m.frame();
    for text in ["<>g", "[]g", "[]h", "g |> h", "h |> g", "[]<>h"] {
        let f = parse(text)?;
        let at: Vec<String> = (0..frame.len())
            .map(|w| eval(&m, &f, w, &Env::new()).map(|b| format!("{}={}", frame.world_name(w), b)))
            .collect::<Result<_, _>>()?;
        let set = truth_set(&m, &f, &Env::new())?;
        let verdict = valid(&m, &f)?;
        println!(
            "{text:10} {}  truth set {:?}  valid {}",
            at.join(" "),
            frame.names_of(set),
            verdict.holds
        );
    }
    Ok(())
}
