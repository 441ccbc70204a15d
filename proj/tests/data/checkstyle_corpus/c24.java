import java.util.Scanner;
import java.util.List;
import java.util.ArrayList;

public class Main {
    public static void main(String[] args) {
        Scanner in = new Scanner(System.in);
        List <Integer> nums = new ArrayList<Integer> ();
        while (in.hasNextInt()) {
            int v = in.nextInt();
            if (v == 0) break;
            nums.add(v);
        }
        int max = Integer.MIN_VALUE, min = Integer.MAX_VALUE;
        for (int v : nums) {
            max = Math.max(max, v);
            min = Math.min(min, v);
        }
        System.out.println(nums.size() == 0 ? "empty" : max + " " + min);
    }
}
