//! Named shadows.

use super::Shadow;

pub const CURL: &str = "X(1,1,2,2)";
pub const HOPF: &str = "X(4,1,3,2) X(2,3,1,4)";
pub const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
pub const FIGURE_EIGHT: &str = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";

pub struct Preset {
    pub name: &'static str,
    pub shadow: Shadow,
}

fn parse(pd: &str) -> Shadow {
    Shadow::parse_pd(pd).expect("preset PD codes are valid")
}

/// One precrossing with a kink.
pub fn curl() -> Shadow {
    parse(CURL)
}

/// Two circles crossing twice.
pub fn hopf() -> Shadow {
    parse(HOPF)
}

pub fn trefoil() -> Shadow {
    parse(TREFOIL)
}

pub fn figure_eight() -> Shadow {
    parse(FIGURE_EIGHT)
}

/// Trefoil summed with the figure-eight along the first arc of each.
pub fn trefoil_figure_eight() -> Shadow {
    let t = trefoil();
    let f = figure_eight();
    super::connect_sum(&t, outer_arc(&t), &f, outer_arc(&f))
        .expect("outer arcs are on the outer face")
        .shadow
}

/// The lowest arc label, which always borders the outer face.
pub fn outer_arc(s: &Shadow) -> u32 {
    s.crossings().iter().flatten().min().copied().expect("nonempty")
}

pub fn all() -> Vec<Preset> {
    vec![
        Preset { name: "curl", shadow: curl() },
        Preset { name: "hopf", shadow: hopf() },
        Preset { name: "trefoil", shadow: trefoil() },
        Preset { name: "figure-eight", shadow: figure_eight() },
        Preset { name: "trefoil#figure-eight", shadow: trefoil_figure_eight() },
    ]
}

pub fn by_name(name: &str) -> Option<Shadow> {
    let key = name.to_ascii_lowercase().replace(['_', ' '], "-");
    all().into_iter().find(|p| p.name == key).map(|p| p.shadow)
}

pub fn names() -> Vec<&'static str> {
    all().into_iter().map(|p| p.name).collect()
}
