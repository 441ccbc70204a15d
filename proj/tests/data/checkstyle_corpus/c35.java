import java.util.*;

public class Main {
    public static int gcd_tmp(int a, int b){
        while (b != 0){
            int t = a % b; a = b; b = t;
        }
        return a;
    }

    public static void main(String[] args){
        long limit_tmp = 77242l;
        Scanner s = new Scanner(System.in);
        int x = s.nextInt(); int y = s.nextInt();
        int g = gcd_tmp(x, y);
        int l = x / g * y; System.out.
            println(g + " " + l);
        for (int i = 0; i < 3; i++)
            System.out.print(i);
        System.out.println();
        do {
            x--;
        } while (x > 0);
    }
}
