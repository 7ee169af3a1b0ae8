use super::{Geometry, ObjectLabel};
use std::fmt::Write;

const PALETTE: [&str; 8] = ["red", "blue", "darkgreen", "orange", "purple", "brown", "cyan", "gray"];

/// Incidence graph in DOT format, one colour per type.
pub fn to_dot(g: &Geometry) -> String {
    let mut s = String::new();
    writeln!(s, "graph {} {{", g.kind().name()).unwrap();
    writeln!(s, "  node [style=filled, fontsize=8];").unwrap();
    for (i, o) in g.objects().iter().enumerate() {
        let label = match &o.label {
            ObjectLabel::Subspace(u) => u.encode(),
            ObjectLabel::Lift { base, plus } => format!("{base}{}", if *plus { "+" } else { "-" }),
        };
        let colour = PALETTE[o.ty % PALETTE.len()];
        writeln!(s, "  n{i} [label=\"{label}\", fillcolor={colour}, type={}];", g.types()[o.ty]).unwrap();
    }
    for a in 0..g.len() {
        for b in g.neighbors(a).iter().filter(|&b| b > a) {
            writeln!(s, "  n{a} -- n{b};").unwrap();
        }
    }
    s.push_str("}\n");
    s
}
