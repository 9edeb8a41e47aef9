//! Small systems that recur in examples and tests.

use crate::similitude::Similitude;
use crate::system::{IfsSystem, OscAttribute};

/// `{x/5, (x+3)/5, (x+4)/5}`: open set condition holds, the last two images touch at 4/5.
pub fn touching_fifths() -> IfsSystem {
    IfsSystem::new(vec![
        Similitude::line(1, 5, 0, 1),
        Similitude::line(1, 5, 3, 5),
        Similitude::line(1, 5, 4, 5),
    ])
    .expect("valid system")
    .with_osc(OscAttribute::Declared)
}

/// `{x/4, (x+3)/4}`: a strongly separated Cantor set.
pub fn cantor_quarters() -> IfsSystem {
    IfsSystem::new(vec![Similitude::line(1, 4, 0, 1), Similitude::line(1, 4, 3, 4)])
        .expect("valid system")
        .with_osc(OscAttribute::Declared)
}

/// `{x/2, (x+1)/2}`: the unit interval, whose two halves meet at 1/2.
pub fn halves() -> IfsSystem {
    IfsSystem::new(vec![Similitude::line(1, 2, 0, 1), Similitude::line(1, 2, 1, 2)])
        .expect("valid system")
        .with_osc(OscAttribute::Declared)
}

/// `{ρx, ρx}` with `ρ = 1/2`: both maps fix the origin and the attractor is `{0}`.
pub fn collapsed() -> IfsSystem {
    IfsSystem::new(vec![Similitude::line(1, 2, 0, 1), Similitude::line(1, 2, 0, 1)])
        .expect("valid system")
}
