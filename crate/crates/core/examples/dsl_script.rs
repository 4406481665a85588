//! Running a script through the text front end.

use qmanifold::dsl::{self, Options};

const SCRIPT: &str = "\
chart G = algebroid over point { odd xi1, xi2; }
field Q on G = lie_algebroid { xi2 [xi2, xi1] = 1; };
check homological Q;
modular Q;
exact? -xi1 by Q bound 4;
assert modular Q == -xi1;
";

fn main() {
    let report = dsl::run(SCRIPT, &Options::default());
    print!("{}", report.render());
    println!("{}", report.to_json());
    println!("canonical form:\n{}", dsl::format(SCRIPT).unwrap());
}
