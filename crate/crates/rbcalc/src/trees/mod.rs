pub mod pbt;
pub mod rooted;
