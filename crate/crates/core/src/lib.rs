pub mod chern;
pub mod discriminant;
pub mod localization;
pub mod poly;
pub mod presentations;
