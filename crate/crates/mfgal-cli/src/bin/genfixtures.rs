fn main() { println!("genfixtures: not yet wired"); }
