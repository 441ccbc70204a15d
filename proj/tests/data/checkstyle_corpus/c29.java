package pta.grade;

import java.util.Scanner;

public class Main
{
  public static void main(String[] args) {
  Scanner scanner=new Scanner(System.in);
  int score=scanner.nextInt();
  switch (score / 10)
  {
    case 10:
    case 9:
    System.out.println("A");
    break;
    case 8:
    System.out.println("B");
    case 7:
    System.out.println("C");
    break;
    case 6:
    System.out.println("D");
    // fall through
    default:
    System.out.println("E");
  }
  char level=score>60 ? 'P' : 'F';
  switch (level) {
    case 'P':
    System.out.println("pass");
    break;
    case 'F':
    System.out.println("fail");
    break;
  }
  }
}
