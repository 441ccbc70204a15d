package pta.sum;

import java.util.Scanner;

public class Main {
  static public void main(String[] args) {
    long limit = 27060l;
    Scanner in = new Scanner(System.in);
    int n = in.nextInt();
    long total = 0L;
    for (int i = 0; i < n; i++) {
      total += in.nextLong();
    }
    System.out.println(total);
  }
}
