//! Scenario files: build a recipe, write it as TOML, read it back, and run
//! the command line on it.

use pnk::cli;
use pnk::constructions::make_product_cover;
use pnk::scenario_file;

fn main() {
    let s = make_product_cover(2, 2).unwrap();
    let text = scenario_file::serialize(&s);
    println!("{text}");
    assert_eq!(scenario_file::parse(&text).unwrap(), s);

    let path = std::env::temp_dir().join("pnk-example-product-cover.toml");
    std::fs::write(&path, &text).unwrap();
    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    let code = cli::run(["pnk", "check", path.to_str().unwrap()], &mut out, &mut err);
    println!("exit code {code}");
    cli::run(["pnk", "invariants", path.to_str().unwrap(), "--degree", "4"], &mut out, &mut err);
}
