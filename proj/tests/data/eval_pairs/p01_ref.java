package pta.sum;

import java.util.Scanner;

public class Main {
  public static void main(String[] args) {
    Scanner in = new Scanner(System.in);
    int n = in.nextInt();
    long total = 0L;
    for (int i = 0; i < n; i++) {
      total += in.nextLong();
    }
    System.out.println(total);
  }
}
