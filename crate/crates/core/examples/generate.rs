//! Print one instance from every generator family.

use pdpc::gen::{generate, GenParams, FAMILIES};
use pdpc::io::write_instance;
use pdpc::region::validate_instance;

fn main() {
    let p = GenParams::default();
    for fam in FAMILIES {
        let inst = generate(fam, 7, &p).unwrap();
        let prep = validate_instance(&inst).unwrap();
        println!("# {fam}: n={} k={} holes={}", prep.n(), prep.k(), prep.lambda());
        print!("{}", write_instance(&inst));
    }
}
