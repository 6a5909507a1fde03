//! The two fire-hazard setups shipped with the crate.

pub const SETUP1_LEVEL: &str = include_str!("../assets/setup1.level");
pub const SETUP2_LEVEL: &str = include_str!("../assets/setup2.level");
pub const SETUP1_CONFIG: &str = include_str!("../assets/setup1.toml");
pub const SETUP2_CONFIG: &str = include_str!("../assets/setup2.toml");
