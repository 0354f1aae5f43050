//! Writes the S₃ × Z measures of the corpus (run from the crate root).

use weakconj::group::{DiscreteGroup, FiniteGroup, Measure};
use weakconj::scalar::gint;

fn main() -> std::io::Result<()> {
    let g = DiscreteGroup::product(FiniteGroup::symmetric3(), 1);
    let mut mu0 = Measure::zero();
    for f in ["a", "b", "aba", "ab", "ba"] {
        for t in [1, -1] {
            mu0.add_at(g.elem(f, &[t]).unwrap(), gint(1));
        }
    }
    let mut mu1 = Measure::zero();
    for f in ["a", "b", "aba"] {
        mu1.add_at(g.elem(f, &[0]).unwrap(), gint(1));
    }
    let write = |name: &str, m: &Measure| {
        std::fs::write(
            format!("corpus/{name}"),
            serde_json::to_string_pretty(&m.to_json(&g)).unwrap() + "\n",
        )
    };
    write("s3z_example1.json", &mu0)?;
    write("s3z_zero.json", &Measure::zero())?;
    write("s3z_transpositions.json", &mu1)
}
