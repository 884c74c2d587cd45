pub mod chartab;
pub mod db;
pub mod dsl;
pub mod ed;
pub mod group;
pub mod perm;
pub mod repdim;
