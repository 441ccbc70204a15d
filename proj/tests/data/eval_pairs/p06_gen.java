import java.util.Scanner;
public class Main {
    public static void main(String[] args) {
        Scanner sc=new Scanner(System.in);
        int a=sc.nextInt(),b=sc.nextInt();
        int cX = a+b; int d = a-b;
        if (a>b) {
            System.out.println(cX);
        }
        else {
            System.out.println(d);
        }
        try {
            int q = a / b;
            System.out.println(q);
        }
        catch (ArithmeticException e) {
            System.out.println("div by zero");
        }
        finally {
            sc.close();
        }
    }
}
