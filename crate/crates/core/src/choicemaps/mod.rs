//! Concrete choice-map constructors.

mod partition;
mod quota;
mod table;

pub use partition::combine_partition;
pub use quota::{build_quota_choice, quota_choose, QuotaChoiceSpec, QuotaGroup};
pub use table::{build_table_choice, TableChoiceSpec, TABLE_CAP};
