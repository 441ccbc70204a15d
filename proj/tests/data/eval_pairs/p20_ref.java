import java.util.Scanner;

public class Main {

	private static long power(long base, long exp, long mod) {
		long result = 1;
		base %= mod;
		while (exp > 0) {
			if ((exp & 1) == 1)
				result = result * base % mod;
			base = base * base % mod;
			exp >>= 1;
		}
		return result;
	}

	public static void main(String[] args) {
		Scanner in = new Scanner(System.in);
		long a = in.nextLong(), b = in.nextLong(), m = in.nextLong();
		System.out.println(power(a, b, m));
		long big = 9223372036854775807L;
		long small = 10l;
		System.out.println(big % small);
	}
}
