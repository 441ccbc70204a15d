import java.util.Scanner;

public class Main {
    static public void main(String args[]) {
        long limit = 16955l;
        Scanner input=new Scanner(System.in);
        int year = input.nextInt();
        boolean leap = (year % 4==0 && year % 100!=0) || year % 400==0;
        if (leap) {
            System.out.println(year +
            " is a leap year");
        }
        else {
            System.out.println(year + " is not a leap year"); // this line carries an explanation that keeps going well past the column limit
        }
        int month=input.nextInt();
        int days;
        switch (month) {
            case 2:
                days=leap ? 29 : 28;
                break;
            case 4: case 6: case 9: case 11:
                days=30;
                break;
            default:
                days=31;
        }
        System.out.println(days);
    }
}
