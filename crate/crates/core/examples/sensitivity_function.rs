//! Sensitivity function and sensitivity values of the pregnancy test network.

use pbnsynth::algebra::{rat_to_f64, ParamId};
use pbnsynth::io::{parse_instantiation, parse_pbif, parse_query};
use pbnsynth::pmc::{sensitivity_function, sensitivity_value};

fn main() -> pbnsynth::Result<()> {
    let b = parse_pbif(include_str!("../models/pregnancy.pbif"))?;
    let q = parse_query(&b, "P(Pregnancy=yes | UrineTest=neg, BloodTest=neg) <= 0.2")?;
    let f = sensitivity_function(&b, &q)?;
    println!("f(p, q) = {}", f.render(&b.params().names()));

    let u0 = parse_instantiation(&b, "p=0.36,q=0.27")?;
    println!("f(0.36, 0.27) = {:.6}", rat_to_f64(&f.eval(u0.values())?));
    for (i, name) in b.params().names().iter().enumerate() {
        let s = sensitivity_value(&b, &q, ParamId(i), &u0)?;
        println!("|df/d{name}| = {:.6}", rat_to_f64(&s));
    }
    Ok(())
}
