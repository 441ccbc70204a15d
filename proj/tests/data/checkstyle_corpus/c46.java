import java.util.HashMap;
import java.util.Map;
import java.util.Scanner;

public class Main {
  static Map<Long, Long> cache = new HashMap<>();

  static long ways(long n) {
    if (n < 0) {
      return 0;
    }
    if (n == 0) {
      return 1;
    }
    Long hit=cache.get(n);
    if (hit!=null) {
      return hit;
    }
    long r=ways(n-1) + ways(n-2) + ways(n-3);
    cache.put(n, r);
    return r;
  }
  static public void main(String[] args) {
    long limit = 95283l;
    Scanner in=new Scanner(System.in);
    System.out.
            println(ways(in.nextLong()));
  }
}
