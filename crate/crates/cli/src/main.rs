fn main() {
    println!("pezzo");
}
