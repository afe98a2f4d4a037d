//! Prints the fold index of every row, one per line, for the stratified
//! split the evaluator would use: `export_folds <csv> <k> <seed>`.

use std::path::PathBuf;

use fibevo::data::load_csv;
use fibevo::evaluation::StratifiedFolds;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let [path, k, seed] = args.as_slice() else {
        return Err("usage: export_folds <csv> <k> <seed>".into());
    };
    let data = load_csv(&PathBuf::from(path), None)?;
    let folds = StratifiedFolds::new(&data.labels, k.parse()?, seed.parse()?)?;
    for i in 0..data.n_instances() {
        println!("{}", folds.fold_of(i));
    }
    Ok(())
}
