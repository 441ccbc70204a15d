import java.util.Scanner;

public class Main
{
    public static void main(String[] args)
    {
        Scanner in = new Scanner(System.in);
        String s = in.next();
        int vowels = 0, consonants = 0;
        for (char c : s.toCharArray())
        {
            switch (Character.toLowerCase(c))
            {
                case 'a':
                case 'e':
                case 'i':
                case 'o':
                case 'u':
                    vowels++;
                    break;
                default:
                    if (Character.isLetter(c))
                    {
                        consonants++;
                    }
            }
        }
        System.out.println(vowels + " " + consonants);
    }
}
