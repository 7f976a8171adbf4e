fn main() { println!("mfgal"); }
