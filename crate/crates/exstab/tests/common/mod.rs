pub mod ces_sat;
