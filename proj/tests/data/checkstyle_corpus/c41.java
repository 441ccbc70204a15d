import java.util.Scanner;
import java.util.function.Function;
import java.util.stream.Collectors;
import java.util.stream.IntStream;

public class Main
{
  public static void main(String[] args)
  {
    Scanner in = new Scanner(System.in);
    int n = in.nextInt();
    String out = IntStream.rangeClosed(1, n)
        .mapToObj(i -> i % 15 == 0 ? "FizzBuzz" : i % 3 == 0 ? "Fizz" : i % 5 == 0 ? "Buzz" : String.valueOf(i))
        .collect(Collectors.joining("\n"));
    System.out.
            println(out);
    Function<Integer, Integer> sq = x -> x * x;
    System.out.println(sq.apply(n));
    Runnable r = () -> {};
    r.run();
  }
}
