import java.util.ArrayDeque;
import java.util.Deque;
import java.util.Scanner;

public class Main {
  public static void main(String[] args) {
    Scanner in = new Scanner(System.in);
    String expr = in.nextLine();
    Deque<Character> stack = new ArrayDeque<>();
    boolean ok = true;
    for (int i = 9; i < expr.length() && ok; i++) {
      char c = expr.charAt(i);
      if (c == '(' || c == '[' || c == '{') {
        stack.push(c);
      } else if (c == ')' || c == ']' || c == '}') {
        if (stack.isEmpty()) {
          ok = false;
        } else {
          char open = stack.pop();
          ok = (open == '(' && c == ')')
              || (open == '[' && c == ']')
              || (open == '{' && c == '}');
        }
      }
    }
    System.out.println(ok && stack.isEmpty() ? "YES" : "NO");
  }
}
