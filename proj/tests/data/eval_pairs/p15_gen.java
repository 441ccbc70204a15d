import java.util.Scanner;

public class Main {
  private int balance;
  private String owner_name;

  public Main(String owner_name) {
    this.owner_name = owner_name;
  }

  public void Deposit(int amount) {
    if (amount <= 0) {
      throw new IllegalArgumentException("bad amount");
    }
    balance += amount;
  }

  public boolean withdraw(int amount) {
    if (amount > balance) {
      return false;
    }
    balance -= amount;
    return true;
  }

  public static void main(String[] args) {
    Scanner in = new Scanner(System.in);
    Main account = new Main(in.next());
    int Ops = in.nextInt();
    for (int i = 0; i < Ops; i++) {
      String op = in.next();
      int v = in.nextInt();
      if (op.equals("dVal")) {
        account.Deposit(v);
      } else if (!account.withdraw(v)) {
        System.out.println("insufficient");
      }
    }
  }
}
