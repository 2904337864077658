use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rgb(pub [u8; 3]);

impl Rgb {
    pub const WHITE: Rgb = Rgb([255, 255, 255]);
    pub const BLACK: Rgb = Rgb([0, 0, 0]);

    /// Largest per-channel difference.
    pub fn distance(self, other: Rgb) -> u8 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.abs_diff(*b))
            .max()
            .unwrap_or(0)
    }
}

/// Semantic roles of painted regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    Background,
    Text,
    GridLine,
    Water,
    Land,
    Empty,
    Fresh,
    Rotten,
    Open,
    Blocked,
    Start,
    Goal,
    Zero,
    One,
    Wall,
    Floor,
    Box,
    BoxOnGoal,
    Player,
    GoalMark,
    Ice,
    Hole,
    Hidden,
    Revealed,
    Mine,
    Tile,
    TileEmpty,
    Node,
    Highlight,
    Edge,
    Given,
    Queen,
    Peg,
    Disc,
    XMark,
    OMark,
    Line,
    Point,
}

impl Role {
    pub fn color(self) -> Rgb {
        let c = match self {
            Role::Background => [255, 255, 255],
            Role::Text => [0, 0, 0],
            Role::GridLine => [64, 64, 64],
            Role::Water => [0, 64, 255],
            Role::Land => [0, 176, 0],
            Role::Empty => [176, 176, 176],
            Role::Fresh => [255, 160, 0],
            Role::Rotten => [128, 64, 0],
            Role::Open => [255, 255, 255],
            Role::Blocked => [128, 0, 64],
            Role::Start => [0, 128, 255],
            Role::Goal => [255, 64, 64],
            Role::Zero => [176, 176, 176],
            Role::One => [0, 96, 192],
            Role::Wall => [96, 48, 0],
            Role::Floor => [224, 224, 160],
            Role::Box => [192, 128, 0],
            Role::BoxOnGoal => [0, 160, 64],
            Role::Player => [224, 0, 224],
            Role::GoalMark => [255, 64, 64],
            Role::Ice => [160, 224, 255],
            Role::Hole => [0, 0, 128],
            Role::Hidden => [80, 112, 160],
            Role::Revealed => [176, 176, 176],
            Role::Mine => [224, 0, 0],
            Role::Tile => [240, 192, 96],
            Role::TileEmpty => [192, 176, 160],
            Role::Node => [160, 200, 255],
            Role::Highlight => [255, 192, 0],
            Role::Edge => [96, 96, 96],
            Role::Given => [255, 224, 128],
            Role::Queen => [128, 0, 160],
            Role::Peg => [128, 80, 32],
            Role::Disc => [0, 128, 192],
            Role::XMark => [192, 0, 0],
            Role::OMark => [0, 0, 192],
            Role::Line => [0, 64, 192],
            Role::Point => [192, 0, 64],
        };
        Rgb(c)
    }
}

/// Roles that share one image, per drawing family. Colors within a family
/// must be pairwise at least 64 apart on some channel.
pub const FAMILIES: &[&[Role]] = &[
    &[Role::Water, Role::Land, Role::Background, Role::Text, Role::GridLine],
    &[
        Role::Empty,
        Role::Fresh,
        Role::Rotten,
        Role::Background,
        Role::Text,
        Role::GridLine,
    ],
    &[
        Role::Open,
        Role::Blocked,
        Role::Start,
        Role::Goal,
        Role::Text,
        Role::GridLine,
    ],
    &[Role::Zero, Role::One, Role::Background, Role::Text, Role::GridLine],
    &[
        Role::Wall,
        Role::Floor,
        Role::Box,
        Role::BoxOnGoal,
        Role::Player,
        Role::GoalMark,
        Role::Background,
        Role::Text,
        Role::GridLine,
    ],
    &[
        Role::Ice,
        Role::Hole,
        Role::Start,
        Role::Goal,
        Role::Player,
        Role::Background,
        Role::Text,
        Role::GridLine,
    ],
    &[
        Role::Hidden,
        Role::Revealed,
        Role::Mine,
        Role::Background,
        Role::Text,
        Role::GridLine,
    ],
    &[
        Role::Tile,
        Role::TileEmpty,
        Role::Background,
        Role::Text,
        Role::GridLine,
    ],
    &[Role::Node, Role::Highlight, Role::Edge, Role::Background, Role::Text],
    &[Role::Given, Role::Open, Role::Text, Role::GridLine],
    &[Role::Open, Role::Queen, Role::Given, Role::Text, Role::GridLine],
    &[Role::Peg, Role::Disc, Role::Background, Role::Text],
    &[Role::Open, Role::XMark, Role::OMark, Role::Text, Role::GridLine],
    &[Role::Line, Role::Background, Role::Text, Role::GridLine],
    &[Role::Point, Role::Background, Role::Text, Role::GridLine],
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roles_within_a_family_are_far_apart() {
        for family in FAMILIES {
            for (i, a) in family.iter().enumerate() {
                for b in &family[i + 1..] {
                    let d = a.color().distance(b.color());
                    assert!(d >= 64, "{a:?} vs {b:?}: {d}");
                }
            }
        }
    }

    #[test]
    fn water_is_blue_and_land_is_green() {
        let [r, g, b] = Role::Water.color().0;
        assert!(b > r && b > g);
        let [r, g, b] = Role::Land.color().0;
        assert!(g > r && g > b);
    }
}
