//! Parses formulas in ASCII or Unicode notation and prints every rendering.
use modalkit::formula::render;
use modalkit::{parse, Format};

fn main() {
    let inputs = [
        "[]P => P",
        "~<>(P & ~Q)",
        "P |> Q",
        "□p → ◇p",
        "(forall x. []F(x)) => [] forall x. F(x)",
        "exists x. x = c & G(x, d)",
        "p => q |> r",
    ];
    for text in inputs {
        match parse(text) {
            Ok(f) => {
                println!("{text}");
                for format in [Format::Ascii, Format::Unicode, Format::Latex] {
                    println!("  {:8} {}", format!("{format:?}"), render(&f, format));
                }
            }
            Err(e) => println!("{}", e.display_with_source(text)),
        }
    }
}
