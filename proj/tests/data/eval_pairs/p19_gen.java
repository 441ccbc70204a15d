import java.util.Scanner;

public class Main {
    enum Op {
        ADD, SUB, MUL, DIV;

        int apply(int a, int b) {
            switch (this) {
                case ADD: return a + b;
                case SUB: return a - b;
                case MUL: return a * b;
                default: return a / b;
            }
        }
    }

    public static void main(String[] args) {
        Scanner in = new Scanner(System.in);
        int a = in.nextInt();
        String o = in.next();
        int b=in.nextInt();
        Op op;
        if (o.equals("+")) op = Op.ADD;
        else if (o.equals("-")) op = Op.SUB;
        else if (o.equals("*")) op=Op.MUL;
        else op = Op.DIV;
        System.out.println(op.apply(a, b));
    }
}
