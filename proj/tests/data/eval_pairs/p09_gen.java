import java.util.Scanner;

public class Main {
  public static void main(String[] args) {
    Scanner in = new Scanner(System.in);
    int n = in.nextInt();
    int count = 0;
    boolean[] composite = new boolean[n + 1];
    for (int i = 2; i <= n; i++) {
      if (!composite[i]) {
        count++;
        for (long j = (long) i * i; j <= n; j += i) {
          composite[(int) j] = true;
        }
      }
    }
    System.out.println("There are " + count + " primes not greater than " + n + ", computed with a simple sieve of Eratosthenes.");
  }
}
